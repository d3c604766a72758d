#include "io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace gjbd::cli {

Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try
    {
        return Json::parse(in);
    }
    catch (const Json::parse_error& e)
    {
        throw FormatError(path + ": " + e.what());
    }
}

void write_json(const Json& doc, const std::string& path)
{
    if (path == "-")
    {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

Json number(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double number_from_json(const Json& j, const std::string& what)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string())
    {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw FormatError(what + ": expected a number");
}

Json matrix_to_json(const Matrix& m)
{
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
}

Matrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& what)
{
    if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols)
        throw FormatError(what + ": expected an array of " + std::to_string(rows * cols) + " numbers");
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
    {
        for (Index c = 0; c < cols; ++c)
        {
            const Json& v = j[static_cast<std::size_t>(r * cols + c)];
            if (!v.is_number()) throw FormatError(what + ": non-numeric entry");
            m(r, c) = v.get<double>();
            if (!std::isfinite(m(r, c))) throw FormatError(what + ": non-finite entry");
        }
    }
    return m;
}

Partition partition_from_json(const Json& j, const std::string& what)
{
    if (!j.is_array()) throw FormatError(what + ": expected an array of block sizes");
    std::vector<Index> sizes;
    for (const Json& v : j)
    {
        if (!v.is_number_integer()) throw FormatError(what + ": block sizes must be integers");
        sizes.push_back(v.get<Index>());
    }
    try
    {
        return Partition(std::move(sizes));
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(what + ": " + e.what());
    }
}

Partition parse_partition(const std::string& text)
{
    std::vector<Index> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        long long v = 0;
        try
        {
            v = std::stoll(item, &used);
        }
        catch (const std::exception&)
        {
            throw FormatError("bad partition '" + text + "'");
        }
        if (used != item.size()) throw FormatError("bad partition '" + text + "'");
        sizes.push_back(static_cast<Index>(v));
    }
    try
    {
        return Partition(std::move(sizes));
    }
    catch (const std::invalid_argument&)
    {
        throw FormatError("bad partition '" + text + "'");
    }
}

MatrixSetFile parse_matrix_set(const Json& doc)
{
    if (!doc.is_object()) throw FormatError("matrix set: expected a JSON object");
    for (const char* key : {"n", "m", "matrices"})
        if (!doc.contains(key)) throw FormatError(std::string("matrix set: missing field '") + key + "'");
    if (!doc["n"].is_number_integer() || !doc["m"].is_number_integer())
        throw FormatError("matrix set: n and m must be integers");
    const auto n = doc["n"].get<Index>();
    const auto m = doc["m"].get<Index>();
    if (n < 1 || m < 1) throw FormatError("matrix set: n and m must be positive");
    const Json& mats = doc["matrices"];
    if (!mats.is_array() || static_cast<Index>(mats.size()) != m)
        throw FormatError("matrix set: 'matrices' must hold m arrays");

    std::vector<Matrix> list;
    for (Index i = 0; i < m; ++i)
        list.push_back(matrix_from_json(mats[static_cast<std::size_t>(i)], n, n, "matrices[" + std::to_string(i) + "]"));

    MatrixSetFile f{MatrixSet(std::move(list)), std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    if (doc.contains("v_inv")) f.v_inv = matrix_from_json(doc["v_inv"], n, n, "v_inv");
    if (doc.contains("p_true"))
    {
        f.p_true = partition_from_json(doc["p_true"], "p_true");
        if (f.p_true->order() != n) throw FormatError("p_true: sizes must sum to n");
    }
    if (doc.contains("snr")) f.snr = number_from_json(doc["snr"], "snr");
    if (doc.contains("seed") && doc["seed"].is_number_unsigned()) f.seed = doc["seed"].get<std::uint64_t>();
    return f;
}

Json to_json(const MatrixSetFile& f)
{
    Json doc;
    doc["n"] = f.a.order();
    doc["m"] = f.a.count();
    doc["matrices"] = Json::array();
    for (const Matrix& ai : f.a) doc["matrices"].push_back(matrix_to_json(ai));
    if (f.v_inv) doc["v_inv"] = matrix_to_json(*f.v_inv);
    if (f.p_true) doc["p_true"] = f.p_true->sizes();
    if (f.snr) doc["snr"] = number(*f.snr);
    if (f.seed) doc["seed"] = *f.seed;
    return doc;
}

MatrixSetFile read_matrix_set(const std::string& path)
{
    try
    {
        return parse_matrix_set(read_json(path));
    }
    catch (const FormatError& e)
    {
        throw FormatError(path + ": " + e.what());
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(path + ": " + e.what());
    }
    catch (const Json::exception& e)
    {
        throw FormatError(path + ": " + e.what());
    }
}

Solution solution_from_json(const Json& doc, Index n)
{
    try
    {
        for (const char* key : {"partition", "w", "cost"})
            if (!doc.contains(key)) throw FormatError(std::string("solution: missing field '") + key + "'");
        Partition p = partition_from_json(doc["partition"], "partition");
        if (p.order() != n) throw FormatError("solution: partition does not match n");
        Matrix w = matrix_from_json(doc["w"], n, n, "w");
        const double cost = number_from_json(doc["cost"], "cost");
        const bool trivial = doc.value("trivial", false);
        return Solution{std::move(p), std::move(w), cost, trivial};
    }
    catch (const Json::exception& e)
    {
        throw FormatError(std::string("solution: ") + e.what());
    }
}

}  // namespace gjbd::cli
