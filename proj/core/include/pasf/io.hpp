#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pasf/continuous.hpp"
#include "pasf/reconstruct.hpp"

namespace pasf {

using Json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// PASF JSON schema (schema: 1): p, r, d, n, F row-major n x d, T row-major
// d x n, label. Doubles round-trip bit-exactly (shortest decimal form).
Json frame_to_json(const Pasf& p);
Pasf frame_from_json(const Json& j, bool* defaulted_r = nullptr);

void save_frame(const Pasf& p, const std::filesystem::path& path);
Pasf load_frame(const std::filesystem::path& path, bool* defaulted_r = nullptr);

Json estimate_to_json(const OperatorNormEstimate& est);
Json bounds_to_json(const FrameBounds& fb);
Json classification_to_json(const FrameClass& fc);
Json certificate_to_json(const PartitionCertificate& cert);  // indices 1-based on disk
PartitionCertificate certificate_from_json(const Json& j);
Json report_to_json(const SearchReport& rep);
Json trace_to_json(const ReconstructionTrace& trace, bool include_iterates);

// tabulated continuous pair from CSV columns: alpha, w, f_0..f_{d-1},
// tau_0..tau_{d-1}; rows interpolated linearly in alpha
ContinuousPasf load_tabulated_continuous(const std::filesystem::path& csv_path,
                                         Exponent p, Exponent r);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

}  // namespace pasf
