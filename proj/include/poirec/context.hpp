#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "poirec/domain.hpp"
#include "poirec/linear.hpp"

namespace poirec {

// Crowdsourced appropriateness degrees F_app(category, context value),
// each in [-1, +1]. Pairs absent from the table read as 0 (subjective
// midpoint).
class ContextFeatureTable {
 public:
  void set(const std::string& category, const std::string& context_value, double value);
  double value(const std::string& category, const std::string& context_value) const;
  std::size_t size() const { return values_.size(); }
  const std::map<std::pair<std::string, std::string>, double>& all() const {
    return values_;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> values_;
};

// CSV with header `category,context,value`; rejects out-of-range values and
// unknown context tokens with the offending line number.
ContextFeatureTable load_feature_table(const std::string& path);

// (mean, min, max) of F_app over the venue's categories, for each of the
// three active context values: duration, group, trip type, in that order.
std::array<double, 9> context_feature_vector(const ContextFeatureTable& table,
                                             const std::vector<std::string>& categories,
                                             const ContextSpec& ctx);

struct AppropriatenessExample {
  std::vector<std::string> categories;
  ContextSpec context;
  bool appropriate = false;
};

struct AppropriatenessModel {
  bool degenerate = false;  // single-class training data
  LinearModel model;
};

AppropriatenessModel train_appropriateness(const std::vector<AppropriatenessExample>& examples,
                                           const ContextFeatureTable& table,
                                           const HingeParams& params);

// Decision value on the venue's context feature vector (S_cxt).
double context_score(const AppropriatenessModel& model, const ContextFeatureTable& table,
                     const std::vector<std::string>& categories, const ContextSpec& ctx);

}  // namespace poirec
