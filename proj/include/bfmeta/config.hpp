#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bfmeta/data.hpp"
#include "bfmeta/priors.hpp"

namespace bfmeta {

// Flat `key = value` file. `#` starts a comment; blank lines are ignored.
// Keys are case-sensitive and may appear once.
class KeyValueFile {
public:
    static KeyValueFile parse(std::istream& in, std::string source = "<config>",
                              std::filesystem::path base_dir = {});
    static KeyValueFile load(const std::filesystem::path& path);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    std::string require(std::string_view key) const;

    // Throws ConfigParse naming the first key not in `known`.
    void reject_unknown(const std::set<std::string, std::less<>>& known) const;

    // Directory of the file; relative paths inside the file resolve against it.
    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::filesystem::path base_dir_;
    std::string source_;
};

// Splits at separators outside (), [], {} and quotes; trims each piece.
std::vector<std::string> split_top_level(std::string_view text, char sep = ',');

// All throw ConfigParse.
double parse_number(std::string_view text, std::string_view what);
std::size_t parse_count(std::string_view text, std::string_view what);
std::vector<double> parse_number_list(std::string_view text, std::string_view what);
std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view what);

// Shorthand `normal(0,1)`, `t(0,2.35,13)`, `cauchy(0,0.707)`,
// `logistic(0,0.5)`, `unit_information`, `default` (scale default), or a
// tagged record `{family: "student_t", location: 0, scale: 2.35, df: 13}`.
EffectPrior parse_effect_prior(std::string_view text, Scale scale);

// `berger_deely`, `uniform_tau2`, `uniform_tau`, `ig_tau(1,0.15)`, `default`
// (Berger-Deely) or a tagged record `{family: "ig_tau", shape: 1, scale: 0.15}`.
HeterogeneityPrior parse_het_prior(std::string_view text);

std::vector<EffectPrior> parse_effect_prior_list(std::string_view text, Scale scale);
std::vector<HeterogeneityPrior> parse_het_prior_list(std::string_view text);

// Lowercase name safe for file names: runs of other characters become '_'.
std::string file_slug(std::string_view text);

}  // namespace bfmeta
