#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace bfmeta {

// Analysis scale of the effect sizes. Scale-specific default priors exist for
// all but Other.
enum class Scale { SMD, LogOdds, FisherZ, Other };

Scale parse_scale(std::string_view text);
std::string_view to_string(Scale scale) noexcept;

struct Study {
    std::string id;
    std::optional<int> year;
    double y = 0.0;   // effect estimate on the analysis scale
    double se = 1.0;  // known standard error
    std::optional<int> n;
};

// Ordered, validated collection of studies. Immutable after construction.
class Dataset {
public:
    Dataset() = default;

    std::size_t k() const noexcept { return studies_.size(); }
    const std::vector<Study>& studies() const noexcept { return studies_; }
    const Study& operator[](std::size_t i) const { return studies_[i]; }
    Scale scale() const noexcept { return scale_; }

    const Eigen::ArrayXd& y() const noexcept { return y_; }
    const Eigen::ArrayXd& var() const noexcept { return var_; }  // sigma_i^2
    double sigma2_min() const noexcept { return sigma2_min_; }

    // Sum of n_i; empty unless every study reports n.
    std::optional<long long> total_n() const noexcept { return total_n_; }
    bool missing_sample_sizes() const noexcept { return !total_n_.has_value(); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    // First j studies in the current order.
    Dataset prefix(std::size_t j) const;
    Dataset reordered(const std::vector<std::size_t>& order) const;

private:
    friend Dataset validate_dataset(std::vector<Study> rows, Scale scale);

    std::vector<Study> studies_;
    Scale scale_ = Scale::Other;
    Eigen::ArrayXd y_;
    Eigen::ArrayXd var_;
    double sigma2_min_ = 0.0;
    std::optional<long long> total_n_;
    std::vector<std::string> warnings_;
};

// Throws Error{EmptyDataset, NonPositiveSE, NonFiniteValue, DuplicateId,
// InvalidSampleSize}. A missing n is only recorded as a warning.
Dataset validate_dataset(std::vector<Study> rows, Scale scale);

// Stable ascending sort by publication year. Throws MissingYear.
Dataset sort_by_year(const Dataset& d);

// CSV with header `id,year,y,se,n`; year and n may be blank.
Dataset read_dataset_csv(std::istream& in, Scale scale);
Dataset read_dataset_csv(const std::filesystem::path& path, Scale scale);
void write_dataset_csv(const Dataset& d, std::ostream& out);

// A CSV field, quoted when it contains a comma, quote or line break.
std::string csv_field(std::string_view text);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

enum class HypothesisKind { NullZero, TwoSidedAlternative };
enum class HypothesisTarget { CommonEffect, GlobalMean, AllStudyEffects };

struct Hypothesis {
    HypothesisKind kind = HypothesisKind::NullZero;
    HypothesisTarget target = HypothesisTarget::CommonEffect;

    static Hypothesis null(HypothesisTarget t) { return {HypothesisKind::NullZero, t}; }
    static Hypothesis alternative(HypothesisTarget t) { return {HypothesisKind::TwoSidedAlternative, t}; }
    bool is_null() const noexcept { return kind == HypothesisKind::NullZero; }
};

}  // namespace bfmeta
