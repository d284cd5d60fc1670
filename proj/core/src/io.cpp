#include "pasf/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pasf {

namespace {

Json mat_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vec_to_json(const Vec& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Mat flat_to_mat(const Json& arr, Eigen::Index rows, Eigen::Index cols, const char* name) {
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols)
        throw SchemaError(std::string("frame schema: ") + name + " must be a flat row-major array of " +
                          std::to_string(rows * cols) + " numbers");
    Mat m(rows, cols);
    Eigen::Index k = 0;
    for (const auto& x : arr) {
        if (!x.is_number()) throw SchemaError(std::string("frame schema: non-numeric entry in ") + name);
        const double v = x.get<double>();
        if (!std::isfinite(v)) throw SchemaError(std::string("frame schema: non-finite entry in ") + name);
        m(k / cols, k % cols) = v;
        ++k;
    }
    return m;
}

}  // namespace

Json frame_to_json(const Pasf& p) {
    if (!p.functionals.allFinite() || !p.vectors.allFinite())
        throw SchemaError("frame_to_json: non-finite entries");
    Json j;
    j["schema"] = 1;
    j["label"] = p.label;
    j["p"] = p.p.value();
    j["r"] = p.r.value();
    j["d"] = p.dim();
    j["n"] = p.size();
    Json f = Json::array();
    for (Eigen::Index i = 0; i < p.functionals.rows(); ++i)
        for (Eigen::Index k = 0; k < p.functionals.cols(); ++k) f.push_back(p.functionals(i, k));
    Json t = Json::array();
    for (Eigen::Index i = 0; i < p.vectors.rows(); ++i)
        for (Eigen::Index k = 0; k < p.vectors.cols(); ++k) t.push_back(p.vectors(i, k));
    j["F"] = std::move(f);
    j["T"] = std::move(t);
    return j;
}

Pasf frame_from_json(const Json& j, bool* defaulted_r) {
    if (!j.is_object()) throw SchemaError("frame schema: not a JSON object");
    if (!j.contains("schema") || !j["schema"].is_number_integer())
        throw SchemaError("frame schema: missing schema version");
    if (j["schema"].get<int>() != 1)
        throw SchemaError("frame schema: forward-incompatible schema version " +
                          j["schema"].dump());
    for (const char* key : {"p", "d", "n", "F", "T"})
        if (!j.contains(key)) throw SchemaError(std::string("frame schema: missing field ") + key);
    const double p = j["p"].get<double>();
    if (!(p >= 1.0)) throw SchemaError("frame schema: p must be >= 1");
    double r = p;
    if (j.contains("r")) {
        r = j["r"].get<double>();
        if (!(r >= 1.0)) throw SchemaError("frame schema: r must be >= 1");
        if (defaulted_r) *defaulted_r = false;
    } else if (defaulted_r) {
        *defaulted_r = true;  // legacy file: default r = p
    }
    const Eigen::Index d = j["d"].get<Eigen::Index>();
    const Eigen::Index n = j["n"].get<Eigen::Index>();
    if (d < 1 || n < 1) throw SchemaError("frame schema: d, n must be positive");
    Mat f = flat_to_mat(j["F"], n, d, "F");
    Mat t = flat_to_mat(j["T"], d, n, "T");
    std::string label = j.contains("label") ? j["label"].get<std::string>() : std::string{};
    try {
        return make_explicit(std::move(f), std::move(t), Exponent(p), Exponent(r), std::move(label));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("frame schema: ") + e.what());
    }
}

void save_frame(const Pasf& p, const std::filesystem::path& path) {
    atomic_write(path, frame_to_json(p).dump(2) + "\n");
}

Pasf load_frame(const std::filesystem::path& path, bool* defaulted_r) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("frame schema: malformed JSON: ") + e.what());
    }
    return frame_from_json(j, defaulted_r);
}

Json estimate_to_json(const OperatorNormEstimate& est) {
    Json j;
    j["lower"] = est.lower;
    j["upper"] = est.upper;
    j["method"] = to_string(est.method);
    j["starts"] = est.starts;
    j["seed"] = est.seed;
    j["certified"] = est.certified;
    j["witness"] = vec_to_json(est.witness);
    return j;
}

Json bounds_to_json(const FrameBounds& fb) {
    Json j;
    j["a"] = fb.a;
    j["b"] = fb.b;
    j["a_cert"] = estimate_to_json(fb.a_cert);
    j["b_cert"] = estimate_to_json(fb.b_cert);
    return j;
}

Json classification_to_json(const FrameClass& fc) {
    Json j;
    j["tag"] = to_string(fc.tag);
    if (fc.tag == FrameClassTag::tight || fc.tag == FrameClassTag::parseval)
        j["lambda"] = fc.tight_lambda;
    Json ev = Json::array();
    for (const auto& e : fc.evidence) {
        Json item;
        item["check"] = e.check;
        item["passed"] = e.passed;
        item["value"] = e.value;
        if (!e.detail.empty()) item["detail"] = e.detail;
        ev.push_back(std::move(item));
    }
    j["evidence"] = std::move(ev);
    return j;
}

Json certificate_to_json(const PartitionCertificate& cert) {
    Json j;
    j["criterion"] = cert.criterion;
    Json parts = Json::array();
    for (const auto& part : cert.parts) {
        Json p = Json::array();
        for (int i : part) p.push_back(i + 1);  // 1-based on disk
        parts.push_back(std::move(p));
    }
    j["parts"] = std::move(parts);
    Json thresholds;
    if (cert.criterion == "feichtinger") thresholds["a_min"] = cert.a_min;
    if (cert.criterion == "r-eps") thresholds["eps"] = cert.eps;
    if (cert.criterion == "weaver") {
        thresholds["b"] = cert.b;
        thresholds["eps"] = cert.eps;
    }
    j["thresholds"] = std::move(thresholds);
    if (!cert.per_part_bounds.empty()) {
        Json pp = Json::array();
        for (const auto& b : cert.per_part_bounds) {
            Json item;
            item["lower"] = b.lower;
            item["upper"] = b.upper;
            pp.push_back(std::move(item));
        }
        j["per_part"] = std::move(pp);
    }
    if (!cert.per_part_norms.empty()) j["per_part"] = cert.per_part_norms;
    j["verified"] = cert.verified;
    return j;
}

PartitionCertificate certificate_from_json(const Json& j) {
    PartitionCertificate cert;
    if (!j.is_object() || !j.contains("criterion") || !j.contains("parts"))
        throw SchemaError("certificate schema: missing criterion or parts");
    cert.criterion = j["criterion"].get<std::string>();
    for (const auto& part : j["parts"]) {
        std::vector<int> indices;
        for (const auto& i : part) {
            if (!i.is_number_integer()) throw SchemaError("certificate schema: non-integer index");
            indices.push_back(i.get<int>() - 1);
        }
        cert.parts.push_back(std::move(indices));
    }
    const Json thresholds = j.value("thresholds", Json::object());
    cert.a_min = thresholds.value("a_min", 0.0);
    cert.eps = thresholds.value("eps", 0.0);
    cert.b = thresholds.value("b", 0.0);
    cert.verified = j.value("verified", false);
    return cert;
}

Json report_to_json(const SearchReport& rep) {
    Json j;
    j["status"] = to_string(rep.status);
    j["strategy"] = to_string(rep.strategy);
    j["conjecture"] = rep.conjecture;
    j["nodes_examined"] = rep.nodes_examined;
    j["seed"] = rep.seed;
    j["wall_budget_exceeded"] = rep.wall_budget_exceeded;
    j["objective"] = rep.objective;
    if (rep.minimal_m) j["minimal_M"] = *rep.minimal_m;
    if (rep.certificate) j["certificate"] = certificate_to_json(*rep.certificate);
    if (!rep.subset.empty()) {
        Json s = Json::array();
        for (int i : rep.subset) s.push_back(i + 1);
        j["subset"] = std::move(s);
    }
    if (rep.witness_x) j["witness_x"] = vec_to_json(*rep.witness_x);
    if (rep.witness_y) j["witness_y"] = vec_to_json(*rep.witness_y);
    if (!rep.witness_mats.empty()) {
        Json mats = Json::array();
        for (const Mat& m : rep.witness_mats) mats.push_back(mat_to_json(m));
        j["witness_mats"] = std::move(mats);
        j["witness_coeffs"] = rep.witness_coeffs;
    }
    if (!rep.witness_mats_second.empty()) {
        Json mats = Json::array();
        for (const Mat& m : rep.witness_mats_second) mats.push_back(mat_to_json(m));
        j["witness_mats_functional_side"] = std::move(mats);
        j["witness_coeffs_functional_side"] = rep.witness_coeffs_second;
    }
    if (rep.witness_f) j["witness_F"] = mat_to_json(*rep.witness_f);
    if (rep.witness_t) j["witness_T"] = mat_to_json(*rep.witness_t);
    if (!rep.interval_parts.empty()) {
        Json parts = Json::array();
        for (const auto& intervals : rep.interval_parts) {
            Json one = Json::array();
            for (const auto& iv : intervals) one.push_back(Json::array({iv[0], iv[1]}));
            parts.push_back(std::move(one));
        }
        j["interval_parts"] = std::move(parts);
    }
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

Json trace_to_json(const ReconstructionTrace& trace, bool include_iterates) {
    Json j;
    j["errors"] = trace.errors;
    j["ratio_bound"] = trace.ratio_bound;
    j["condition_value"] = trace.condition_value;
    j["condition_holds"] = trace.condition_holds;
    j["converged"] = trace.converged;
    if (include_iterates) {
        Json its = Json::array();
        for (const Vec& x : trace.iterates) its.push_back(vec_to_json(x));
        j["iterates"] = std::move(its);
    }
    return j;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        field.erase(0, field.find_first_not_of(" \t\r"));
        field.erase(field.find_last_not_of(" \t\r") + 1);
        out.push_back(field);
    }
    return out;
}

}  // namespace

ContinuousPasf load_tabulated_continuous(const std::filesystem::path& csv_path,
                                         Exponent p, Exponent r) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path.string());
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("tabulated continuous: empty file");
    const auto header = split_csv_line(line);
    int d = 0;
    for (const auto& h : header)
        if (h.rfind("f_", 0) == 0) ++d;
    if (d < 1 || header.size() != 2 + 2 * static_cast<std::size_t>(d) ||
        header[0] != "alpha" || header[1] != "w")
        throw SchemaError("tabulated continuous: header must be alpha,w,f_0..,tau_0..");

    struct Row {
        double alpha, w;
        Vec f, tau;
    };
    auto rows = std::make_shared<std::vector<Row>>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw SchemaError("tabulated continuous: ragged row");
        Row row;
        row.alpha = std::stod(fields[0]);
        row.w = std::stod(fields[1]);
        row.f = Vec(d);
        row.tau = Vec(d);
        for (int k = 0; k < d; ++k) {
            row.f[k] = std::stod(fields[2 + static_cast<std::size_t>(k)]);
            row.tau[k] = std::stod(fields[2 + static_cast<std::size_t>(d + k)]);
        }
        rows->push_back(std::move(row));
    }
    if (rows->size() < 2) throw SchemaError("tabulated continuous: need at least two rows");
    std::sort(rows->begin(), rows->end(), [](const Row& a, const Row& b) { return a.alpha < b.alpha; });

    auto interpolate = [rows](double a, auto&& pick) {
        if (a <= rows->front().alpha) return pick(rows->front());
        if (a >= rows->back().alpha) return pick(rows->back());
        std::size_t hi = 1;
        while ((*rows)[hi].alpha < a) ++hi;
        const Row& lo = (*rows)[hi - 1];
        const Row& up = (*rows)[hi];
        const double t = (a - lo.alpha) / (up.alpha - lo.alpha);
        return decltype(pick(lo))((1.0 - t) * pick(lo) + t * pick(up));
    };

    ContinuousPasf c;
    c.domain_lo = rows->front().alpha;
    c.domain_hi = rows->back().alpha;
    c.dim = d;
    c.p = p;
    c.r = r;
    c.label = "tabulated:" + csv_path.filename().string();
    c.weight = [interpolate](double a) { return interpolate(a, [](const Row& r_) { return r_.w; }); };
    c.functional = [interpolate](double a) { return interpolate(a, [](const Row& r_) { return r_.f; }); };
    c.vector = [interpolate](double a) { return interpolate(a, [](const Row& r_) { return r_.tau; }); };
    return c;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << bytes;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace pasf
