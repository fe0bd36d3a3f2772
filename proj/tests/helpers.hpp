#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bfmeta/data.hpp"
#include "bfmeta/rng.hpp"
#include "oracles.hpp"

namespace testing {

inline bfmeta::Dataset make(const std::vector<double>& y, const std::vector<double>& se,
                            std::vector<int> n = {}, bfmeta::Scale scale = bfmeta::Scale::SMD) {
    std::vector<bfmeta::Study> rows;
    for (std::size_t i = 0; i < y.size(); ++i) {
        bfmeta::Study s;
        s.id = "s" + std::to_string(i + 1);
        s.year = 2000 + static_cast<int>(i);
        s.y = y[i];
        s.se = se[i];
        if (!n.empty()) s.n = n[i];
        rows.push_back(s);
    }
    return bfmeta::validate_dataset(std::move(rows), scale);
}

inline oracle::Data to_oracle(const bfmeta::Dataset& d) {
    oracle::Data o;
    for (const auto& s : d.studies()) {
        o.y.push_back(s.y);
        o.se.push_back(s.se);
    }
    o.total_n = d.total_n();
    return o;
}

// Fixed five-study data set used by the frozen oracle comparisons.
inline bfmeta::Dataset five_studies() {
    return make({0.42, 0.11, 0.63, -0.05, 0.30}, {0.21, 0.30, 0.25, 0.18, 0.40}, {40, 60, 50, 80, 30});
}

// Random data set: k in [kmin, kmax], se in [0.05, 1], y around a random mean.
inline bfmeta::Dataset random_dataset(bfmeta::RngStream& rng, std::size_t kmin = 1, std::size_t kmax = 12) {
    const auto k = kmin + static_cast<std::size_t>(rng.uniform() * static_cast<double>(kmax - kmin + 1));
    const double mu = rng.normal(0.0, 0.5);
    const double tau = rng.uniform(0.0, 0.4);
    std::vector<double> y, se;
    std::vector<int> n;
    for (std::size_t i = 0; i < std::min(k, kmax); ++i) {
        se.push_back(rng.uniform(0.05, 1.0));
        y.push_back(rng.normal(mu, std::hypot(se.back(), tau)));
        n.push_back(10 + static_cast<int>(rng.uniform() * 300));
    }
    return make(y, se, n);
}

inline std::filesystem::path source_dir() { return BFMETA_SOURCE_DIR; }

inline std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("bfmeta_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace testing
