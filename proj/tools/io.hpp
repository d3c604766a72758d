#pragma once

#include "gjbd/matrix_set.hpp"
#include "gjbd/partition.hpp"
#include "gjbd/solution.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace gjbd::cli {

using Json = nlohmann::json;

/// Raised for unreadable or malformed input documents.
class FormatError : public std::runtime_error
{
 public:
    using std::runtime_error::runtime_error;
};

struct MatrixSetFile
{
    MatrixSet a;
    std::optional<Matrix> v_inv;
    std::optional<Partition> p_true;
    std::optional<double> snr;
    std::optional<std::uint64_t> seed;
};

Json read_json(const std::string& path);
void write_json(const Json& doc, const std::string& path);  // "-" is stdout

MatrixSetFile parse_matrix_set(const Json& doc);
Json to_json(const MatrixSetFile& f);
MatrixSetFile read_matrix_set(const std::string& path);

Json matrix_to_json(const Matrix& m);  // row-major flat array
Matrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& what);
Partition partition_from_json(const Json& j, const std::string& what);

/// Finite values as numbers, others as the strings "inf", "-inf", "nan".
Json number(double x);
double number_from_json(const Json& j, const std::string& what);

/// Partition from "n1,n2,...".
Partition parse_partition(const std::string& text);

/// Solution stored in a solve result document.
Solution solution_from_json(const Json& doc, Index n);

}  // namespace gjbd::cli
