#include "bfmeta/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "bfmeta/error.hpp"

namespace bfmeta {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, was_quoted = false;
    auto finish = [&] {
        fields.push_back(was_quoted ? cur : trim(cur));
        cur.clear();
        was_quoted = false;
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            // quoted content is kept verbatim, blanks around the quotes are not
            if (!was_quoted) cur = "";
            quoted = was_quoted = true;
        } else if (c == ',') {
            finish();
        } else if (!was_quoted || (c != ' ' && c != '\t' && c != '\r')) {
            cur += c;
        }
    }
    finish();
    return fields;
}

double parse_double(const std::string& s, std::size_t line, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(line) + ": cannot parse " + what + " '" + s + "'");
    }
    return v;
}

std::optional<int> parse_optional_int(const std::string& s, std::size_t line, const char* what) {
    if (s.empty() || s == "NA") return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        double d = parse_double(s, line, what);
        if (d != std::floor(d)) {
            throw Error(ErrorCode::InvalidSampleSize,
                        "line " + std::to_string(line) + ": " + what + " must be an integer, got '" + s + "'");
        }
        v = static_cast<int>(d);
    }
    return v;
}

}  // namespace

Scale parse_scale(std::string_view text) {
    auto s = lower(trim(text));
    if (s == "smd") return Scale::SMD;
    if (s == "logodds" || s == "log_odds" || s == "lor") return Scale::LogOdds;
    if (s == "fisherz" || s == "fisher_z" || s == "z") return Scale::FisherZ;
    if (s == "other") return Scale::Other;
    throw Error(ErrorCode::ConfigParse, "unknown scale '" + std::string(text) + "'");
}

std::string_view to_string(Scale scale) noexcept {
    switch (scale) {
        case Scale::SMD: return "smd";
        case Scale::LogOdds: return "log_odds";
        case Scale::FisherZ: return "fisher_z";
        case Scale::Other: return "other";
    }
    return "other";
}

Dataset validate_dataset(std::vector<Study> rows, Scale scale) {
    if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no studies");
    std::set<std::string> seen;
    for (const auto& s : rows) {
        if (!std::isfinite(s.y) || !std::isfinite(s.se)) {
            throw Error(ErrorCode::NonFiniteValue, "study '" + s.id + "' has a non-finite estimate or standard error");
        }
        if (s.se <= 0.0) throw Error(ErrorCode::NonPositiveSE, "study '" + s.id + "' has se <= 0");
        if (s.n && *s.n < 2) throw Error(ErrorCode::InvalidSampleSize, "study '" + s.id + "' has n < 2");
        if (!seen.insert(s.id).second) throw Error(ErrorCode::DuplicateId, "duplicate study id '" + s.id + "'");
    }

    Dataset d;
    d.scale_ = scale;
    d.studies_ = std::move(rows);
    const auto k = static_cast<Eigen::Index>(d.studies_.size());
    d.y_.resize(k);
    d.var_.resize(k);
    long long total = 0;
    bool all_n = true;
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& s = d.studies_[static_cast<std::size_t>(i)];
        d.y_[i] = s.y;
        d.var_[i] = s.se * s.se;
        if (s.n) total += *s.n;
        else all_n = false;
    }
    d.sigma2_min_ = d.var_.minCoeff();
    if (all_n) d.total_n_ = total;
    else d.warnings_.push_back("MissingNRequiredLater: sample sizes missing; the unit-information prior is unavailable");
    return d;
}

Dataset Dataset::prefix(std::size_t j) const {
    if (j == 0 || j > k()) throw Error(ErrorCode::OutOfRange, "prefix length out of range");
    std::vector<Study> rows(studies_.begin(), studies_.begin() + static_cast<std::ptrdiff_t>(j));
    return validate_dataset(std::move(rows), scale_);
}

Dataset Dataset::reordered(const std::vector<std::size_t>& order) const {
    if (order.size() != k()) throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
    std::vector<Study> rows;
    rows.reserve(k());
    for (auto i : order) rows.push_back(studies_.at(i));
    return validate_dataset(std::move(rows), scale_);
}

Dataset sort_by_year(const Dataset& d) {
    for (const auto& s : d.studies()) {
        if (!s.year) throw Error(ErrorCode::MissingYear, "study '" + s.id + "' has no year");
    }
    std::vector<std::size_t> order(d.k());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return *d[a].year < *d[b].year; });
    return d.reordered(order);
}

Dataset read_dataset_csv(std::istream& in, Scale scale) {
    std::string line;
    std::size_t lineno = 0;
    // header
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) break;
    }
    if (lineno == 0 || trim(line).empty()) throw Error(ErrorCode::EmptyDataset, "empty CSV");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);  // UTF-8 BOM
    auto header = split_csv_line(line);
    for (auto& h : header) h = lower(h);
    auto col = [&](const char* name) -> int {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int ci = col("id"), cyear = col("year"), cy = col("y"), cse = col("se"), cn = col("n");
    if (ci < 0 || cy < 0 || cse < 0) {
        throw Error(ErrorCode::Io, "CSV header must contain id,y,se (expected `id,year,y,se,n`)");
    }

    std::vector<Study> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        auto get = [&](int c) -> std::string { return c >= 0 && c < static_cast<int>(f.size()) ? f[c] : std::string{}; };
        Study s;
        s.id = get(ci);
        s.year = parse_optional_int(get(cyear), lineno, "year");
        s.y = parse_double(get(cy), lineno, "y");
        s.se = parse_double(get(cse), lineno, "se");
        s.n = parse_optional_int(get(cn), lineno, "n");
        rows.push_back(std::move(s));
    }
    return validate_dataset(std::move(rows), scale);
}

Dataset read_dataset_csv(const std::filesystem::path& path, Scale scale) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open dataset '" + path.string() + "'");
    return read_dataset_csv(in, scale);
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string csv_field(std::string_view text) {
    const bool padded = !text.empty() && (std::isspace(static_cast<unsigned char>(text.front())) ||
                                          std::isspace(static_cast<unsigned char>(text.back())));
    if (!padded && text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_dataset_csv(const Dataset& d, std::ostream& out) {
    out << "id,year,y,se,n\n";
    for (const auto& s : d.studies()) {
        out << csv_field(s.id) << ',' << (s.year ? std::to_string(*s.year) : "") << ',' << format_double(s.y) << ','
            << format_double(s.se) << ',' << (s.n ? std::to_string(*s.n) : "") << '\n';
    }
}

}  // namespace bfmeta
