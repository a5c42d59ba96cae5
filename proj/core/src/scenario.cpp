#include "riskgrad/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace riskgrad {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

Vector uniform_probs_of(Index n) {
    return Vector::Constant(n, 1.0 / static_cast<double>(n));
}

// Neumaier-compensated sum; keeps probability totals accurate for large n.
double compensated_sum(const Vector& v) {
    double s = 0.0, c = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
        const double t = s + v(i);
        if (std::abs(s) >= std::abs(v(i)))
            c += (s - t) + v(i);
        else
            c += (v(i) - t) + s;
        s = t;
    }
    return s + c;
}

Vector validate_probs(Vector probs, Index n) {
    require(probs.size() == n, "probability vector length does not match scenario count");
    for (Index i = 0; i < n; ++i) {
        require(std::isfinite(probs(i)), "non-finite probability entry");
        require(probs(i) >= 0.0, "negative probability at scenario " + std::to_string(i));
    }
    const double sum = compensated_sum(probs);
    if (std::abs(sum - 1.0) > Tolerances::prob_sum_load)
        throw ValidationError("probability sum is " + std::to_string(sum) +
                              ", expected 1 within " + std::to_string(Tolerances::prob_sum_load));
    probs /= sum;
    return probs;
}

} // namespace

Weights::Weights(Vector x) : x_(std::move(x)) {
    require(x_.size() >= 1, "weights must have at least one entry");
    require(x_.allFinite(), "weights must be finite");
    require(x_.cwiseAbs().maxCoeff() > 0.0, "weights must not be the zero vector");
}

ConfidenceLevel::ConfidenceLevel(double alpha) : alpha_(alpha) {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
            "confidence level must lie in (0, 1)");
}

ScenarioMatrix::ScenarioMatrix(Matrix losses)
    : losses_(std::move(losses)), uniform_(true) {
    require(losses_.rows() >= 1 && losses_.cols() >= 1, "scenario matrix must be at least 1x1");
    require(all_finite(losses_), "loss entries must be finite");
    probs_ = uniform_probs_of(losses_.rows());
}

ScenarioMatrix::ScenarioMatrix(Matrix losses, Vector probs)
    : losses_(std::move(losses)), uniform_(false) {
    require(losses_.rows() >= 1 && losses_.cols() >= 1, "scenario matrix must be at least 1x1");
    require(all_finite(losses_), "loss entries must be finite");
    probs_ = validate_probs(std::move(probs), losses_.rows());
}

Vector portfolio_loss(const ScenarioMatrix& s, const Weights& x) {
    require(s.assets() == x.size(),
            "dimension mismatch: " + std::to_string(s.assets()) + " assets vs " +
                std::to_string(x.size()) + " weights");
    return s.losses() * x.vec();
}

namespace {

struct CsvTable {
    std::vector<std::string> header; // empty when no header row
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.erase(f.begin());
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.pop_back();
    }
    return out;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) return std::nullopt;
    return v;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (first) {
            first = false;
            bool numeric = true;
            for (const auto& f : fields)
                if (!parse_double(f)) numeric = false;
            if (!numeric) {
                t.header = fields;
                width = fields.size();
                continue;
            }
            width = fields.size();
        }
        if (fields.size() != width)
            throw ValidationError("ragged CSV row in " + path.string() + ": '" + line + "'");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            auto v = parse_double(f);
            if (!v) throw ValidationError("cannot parse CSV value '" + f + "' in " + path.string());
            if (!std::isfinite(*v)) throw ValidationError("non-finite entry in " + path.string());
            row.push_back(*v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw ValidationError("no data rows in " + path.string());
    return t;
}

ScenarioMatrix from_table(const CsvTable& t, ProbColumn prob_column) {
    const std::size_t n = t.rows.size();
    const std::size_t w = t.rows.front().size();

    bool prob_last = false;
    if (!t.header.empty()) {
        std::string last = t.header.back();
        for (auto& c : last) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        prob_last = (last == "prob" || last == "probs" || last == "probability");
    } else if (prob_column == ProbColumn::last) {
        prob_last = true;
    } else if (prob_column == ProbColumn::auto_detect && w >= 2) {
        prob_last = true;
        for (const auto& r : t.rows)
            if (r.back() < 0.0 || r.back() > 1.0) { prob_last = false; break; }
    }

    const std::size_t d = prob_last ? w - 1 : w;
    require(d >= 1, "scenario file must have at least one loss column");
    Matrix losses(static_cast<Index>(n), static_cast<Index>(d));
    Vector probs(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) losses(static_cast<Index>(i), static_cast<Index>(j)) = t.rows[i][j];
        if (prob_last) probs(static_cast<Index>(i)) = t.rows[i][w - 1];
    }
    if (prob_last) return ScenarioMatrix(std::move(losses), std::move(probs));
    return ScenarioMatrix(std::move(losses));
}

ScenarioMatrix read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("JSON parse failure in " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("losses") || !j["losses"].is_array())
        throw ValidationError("JSON scenario file must be an object with a 'losses' array");
    const auto& rows = j["losses"];
    const std::size_t n = rows.size();
    require(n >= 1, "empty 'losses' array in " + path.string());
    const std::size_t d = rows[0].is_array() ? rows[0].size() : 0;
    require(d >= 1, "'losses' rows must be non-empty arrays");
    Matrix losses(static_cast<Index>(n), static_cast<Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != d)
            throw ValidationError("ragged 'losses' row in " + path.string());
        for (std::size_t k = 0; k < d; ++k) {
            if (!rows[i][k].is_number())
                throw ValidationError("non-numeric loss entry in " + path.string());
            losses(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k].get<double>();
        }
    }
    if (j.contains("probs")) {
        const auto& p = j["probs"];
        if (!p.is_array() || p.size() != n)
            throw ValidationError("'probs' must be an array of length n in " + path.string());
        Vector probs(static_cast<Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (!p[i].is_number()) throw ValidationError("non-numeric probability in " + path.string());
            probs(static_cast<Index>(i)) = p[i].get<double>();
        }
        return ScenarioMatrix(std::move(losses), std::move(probs));
    }
    return ScenarioMatrix(std::move(losses));
}

std::string fmt_full(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

ScenarioMatrix load_scenarios(const std::filesystem::path& path, FileFormat format,
                              ProbColumn prob_column) {
    if (!std::filesystem::exists(path))
        throw ValidationError("file does not exist: " + path.string());
    if (format == FileFormat::csv) return from_table(read_csv(path), prob_column);
    return read_json(path);
}

void save_scenarios(const ScenarioMatrix& s, const std::filesystem::path& path,
                    FileFormat format) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    if (format == FileFormat::csv) {
        for (Index j = 0; j < s.assets(); ++j) out << "a" << j << ",";
        out << "prob\n";
        for (Index i = 0; i < s.scenarios(); ++i) {
            for (Index j = 0; j < s.assets(); ++j) out << fmt_full(s.losses()(i, j)) << ",";
            out << fmt_full(s.probs()(i)) << "\n";
        }
        return;
    }
    nlohmann::json j;
    j["losses"] = nlohmann::json::array();
    for (Index i = 0; i < s.scenarios(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index k = 0; k < s.assets(); ++k) row.push_back(s.losses()(i, k));
        j["losses"].push_back(std::move(row));
    }
    j["probs"] = nlohmann::json::array();
    for (Index i = 0; i < s.scenarios(); ++i) j["probs"].push_back(s.probs()(i));
    out << j.dump(2) << "\n";
}

} // namespace riskgrad
