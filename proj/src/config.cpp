#include "bfmeta/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <regex>

#include <json.hpp>

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

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigParse, msg); }

// "name(a,b,...)" -> name and numeric arguments; bare "name" has no arguments.
struct Call {
    std::string name;
    std::vector<double> args;
};

Call parse_call(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    const auto open = s.find('(');
    if (open == std::string::npos) return {lower(s), {}};
    if (s.back() != ')') fail("malformed " + std::string(what) + " '" + s + "'");
    Call c{lower(trim(std::string_view(s).substr(0, open))), {}};
    const auto inner = std::string_view(s).substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) {
        for (const auto& a : split_top_level(inner)) c.args.push_back(parse_number(a, what));
    }
    return c;
}

void want_args(const Call& c, std::size_t n, std::string_view text) {
    if (c.args.size() != n) {
        fail("'" + std::string(text) + "' expects " + std::to_string(n) + " argument(s)");
    }
}

// Record syntax allows bare keys; quote them so the text is JSON.
nlohmann::json parse_record(std::string_view text) {
    static const std::regex bare_key(R"(([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:)");
    const std::string quoted = std::regex_replace(std::string(text), bare_key, "$1\"$2\":");
    try {
        auto j = nlohmann::json::parse(quoted);
        if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
            fail("prior record needs a string field 'family': " + std::string(text));
        }
        return j;
    } catch (const nlohmann::json::exception& e) {
        fail("cannot parse prior record '" + std::string(text) + "': " + e.what());
    }
}

double record_number(const nlohmann::json& j, const char* key, std::string_view text) {
    if (!j.contains(key) || !j[key].is_number()) {
        fail("prior record '" + std::string(text) + "' needs numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

EffectPrior effect_from_call(const Call& c, std::string_view text, Scale scale) {
    const auto& n = c.name;
    EffectPrior p;
    if (n == "default") {
        want_args(c, 0, text);
        p = default_effect_prior(scale);
    } else if (n == "normal" || n == "n") {
        want_args(c, 2, text);
        p = EffectPrior::normal(c.args[0], c.args[1]);
    } else if (n == "t" || n == "student_t") {
        want_args(c, 3, text);
        p = EffectPrior::student_t(c.args[0], c.args[1], c.args[2]);
    } else if (n == "cauchy") {
        want_args(c, 2, text);
        p = EffectPrior::cauchy(c.args[0], c.args[1]);
    } else if (n == "logistic") {
        want_args(c, 2, text);
        p = EffectPrior::logistic(c.args[0], c.args[1]);
    } else if (n == "unit_information" || n == "unit-information") {
        want_args(c, 0, text);
        p = EffectPrior::unit_information();
    } else {
        fail("unknown effect prior '" + std::string(text) + "'");
    }
    try {
        validate(p);
    } catch (const Error& e) {
        fail(e.what());
    }
    return p;
}

HeterogeneityPrior het_from_call(const Call& c, std::string_view text) {
    const auto& n = c.name;
    HeterogeneityPrior p;
    if (n == "default" || n == "berger_deely") {
        want_args(c, 0, text);
        p = HeterogeneityPrior::berger_deely();
    } else if (n == "uniform_tau2") {
        want_args(c, 0, text);
        p = HeterogeneityPrior::uniform_tau2();
    } else if (n == "uniform_tau") {
        want_args(c, 0, text);
        p = HeterogeneityPrior::uniform_tau();
    } else if (n == "ig_tau" || n == "inverse_gamma_tau") {
        want_args(c, 2, text);
        p = HeterogeneityPrior::inverse_gamma_tau(c.args[0], c.args[1]);
    } else {
        fail("unknown heterogeneity prior '" + std::string(text) + "'");
    }
    try {
        validate(p);
    } catch (const Error& e) {
        fail(e.what());
    }
    return p;
}

Call call_from_record(const nlohmann::json& j, std::string_view text, bool effect) {
    Call c{lower(j["family"].get<std::string>()), {}};
    if (effect) {
        if (c.name == "normal" || c.name == "n") {
            c.args = {record_number(j, "location", text), record_number(j, "scale", text)};
        } else if (c.name == "t" || c.name == "student_t") {
            c.args = {record_number(j, "location", text), record_number(j, "scale", text),
                      record_number(j, "df", text)};
        } else if (c.name == "cauchy" || c.name == "logistic") {
            c.args = {record_number(j, "location", text), record_number(j, "scale", text)};
        }
    } else if (c.name == "ig_tau" || c.name == "inverse_gamma_tau") {
        c.args = {record_number(j, "shape", text), record_number(j, "scale", text)};
    }
    return c;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in, std::string source, std::filesystem::path base_dir) {
    KeyValueFile f;
    f.source_ = std::move(source);
    f.base_dir_ = std::move(base_dir);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = f.source_ + ":" + std::to_string(lineno);
        if (eq == std::string::npos) fail(where + ": expected 'key = value'");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) fail(where + ": empty key");
        if (value.empty()) fail(where + ": empty value for '" + key + "'");
        if (f.has(key)) fail(where + ": duplicate key '" + key + "'");
        f.entries_.emplace_back(std::move(key), std::move(value));
    }
    return f;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file " + path.string());
    return parse(in, path.string(), path.parent_path());
}

bool KeyValueFile::has(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string KeyValueFile::require(std::string_view key) const {
    auto v = get(key);
    if (!v) fail(source_ + ": missing required key '" + std::string(key) + "'");
    return *v;
}

void KeyValueFile::reject_unknown(const std::set<std::string, std::less<>>& known) const {
    for (const auto& [k, v] : entries_) {
        if (!known.contains(k)) fail(source_ + ": unknown key '" + k + "'");
    }
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '"') quoted = !quoted;
        if (quoted) continue;
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(text.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (depth != 0 || quoted) fail("unbalanced brackets or quotes in '" + std::string(text) + "'");
    out.push_back(trim(text.substr(start)));
    for (const auto& piece : out) {
        if (piece.empty()) fail("empty list element in '" + std::string(text) + "'");
    }
    return out;
}

double parse_number(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        fail("cannot parse " + std::string(what) + " value '" + s + "'");
    }
    return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    const double v = parse_number(text, what);
    if (v < 0.0 || v != std::floor(v) || v > 1e15) {
        fail(std::string(what) + " must be a non-negative integer, got '" + trim(text) + "'");
    }
    return static_cast<std::size_t>(v);
}

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    for (const auto& piece : split_top_level(text)) out.push_back(parse_number(piece, what));
    return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view what) {
    std::vector<std::size_t> out;
    for (const auto& piece : split_top_level(text)) out.push_back(parse_count(piece, what));
    return out;
}

EffectPrior parse_effect_prior(std::string_view text, Scale scale) {
    const std::string s = trim(text);
    if (!s.empty() && s.front() == '{') return effect_from_call(call_from_record(parse_record(s), s, true), s, scale);
    return effect_from_call(parse_call(s, "effect prior"), s, scale);
}

HeterogeneityPrior parse_het_prior(std::string_view text) {
    const std::string s = trim(text);
    if (!s.empty() && s.front() == '{') return het_from_call(call_from_record(parse_record(s), s, false), s);
    return het_from_call(parse_call(s, "heterogeneity prior"), s);
}

std::vector<EffectPrior> parse_effect_prior_list(std::string_view text, Scale scale) {
    std::vector<EffectPrior> out;
    for (const auto& piece : split_top_level(text)) out.push_back(parse_effect_prior(piece, scale));
    return out;
}

std::vector<HeterogeneityPrior> parse_het_prior_list(std::string_view text) {
    std::vector<HeterogeneityPrior> out;
    for (const auto& piece : split_top_level(text)) out.push_back(parse_het_prior(piece));
    return out;
}

std::string file_slug(std::string_view text) {
    std::string out;
    bool pending = false;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '.' || c == '-') {
            if (pending && !out.empty()) out += '_';
            pending = false;
            out += static_cast<char>(std::tolower(c));
        } else {
            pending = true;
        }
    }
    return out;
}

}  // namespace bfmeta
