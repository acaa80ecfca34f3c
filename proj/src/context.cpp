#include "poirec/context.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace poirec {

void ContextFeatureTable::set(const std::string& category, const std::string& context_value,
                              double value) {
  if (value < -1.0 || value > 1.0)
    throw DataError("context feature value " + std::to_string(value) + " outside [-1, +1]");
  if (!valid_context_value(context_value))
    throw DataError("unknown context value '" + context_value + "'");
  values_[{normalize_category(category), context_value}] = value;
}

double ContextFeatureTable::value(const std::string& category,
                                  const std::string& context_value) const {
  auto it = values_.find({normalize_category(category), context_value});
  return it == values_.end() ? 0.0 : it->second;
}

ContextFeatureTable load_feature_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open context feature table '" + path + "'");

  ContextFeatureTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("category,", 0) == 0) continue;  // header

    std::istringstream row(line);
    std::string category, context, value_str;
    if (!std::getline(row, category, ',') || !std::getline(row, context, ',') ||
        !std::getline(row, value_str))
      throw DataError(path + ":" + std::to_string(line_no) + ": expected category,context,value");
    try {
      const double v = std::stod(value_str);
      table.set(category, context, v);
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad value '" + value_str + "'");
    }
  }
  return table;
}

std::array<double, 9> context_feature_vector(const ContextFeatureTable& table,
                                             const std::vector<std::string>& categories,
                                             const ContextSpec& ctx) {
  validate_context(ctx);
  std::array<double, 9> out{};
  const std::array<const std::string*, 3> dims = {&ctx.duration, &ctx.group, &ctx.trip_type};
  for (std::size_t d = 0; d < dims.size(); ++d) {
    double sum = 0.0, mn = 0.0, mx = 0.0;
    if (!categories.empty()) {
      mn = 1.0;
      mx = -1.0;
      for (const auto& cat : categories) {
        const double v = table.value(cat, *dims[d]);
        sum += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      sum /= static_cast<double>(categories.size());
    }
    out[3 * d] = sum;
    out[3 * d + 1] = mn;
    out[3 * d + 2] = mx;
  }
  return out;
}

namespace {

SparseVec to_sparse(const std::array<double, 9>& features) {
  SparseVec x;
  x.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    x.emplace_back(static_cast<int>(i), features[i]);
  return x;
}

}  // namespace

AppropriatenessModel train_appropriateness(const std::vector<AppropriatenessExample>& examples,
                                           const ContextFeatureTable& table,
                                           const HingeParams& params) {
  if (examples.empty()) throw DataError("train_appropriateness: no examples");

  std::vector<SparseVec> xs;
  std::vector<int> ys;
  xs.reserve(examples.size());
  ys.reserve(examples.size());
  bool saw_pos = false, saw_neg = false;
  for (const auto& ex : examples) {
    xs.push_back(to_sparse(context_feature_vector(table, ex.categories, ex.context)));
    ys.push_back(ex.appropriate ? 1 : -1);
    (ex.appropriate ? saw_pos : saw_neg) = true;
  }

  AppropriatenessModel model;
  model.degenerate = !(saw_pos && saw_neg);
  if (model.degenerate) {
    // constant predictor: bias carries the single observed class
    model.model.weights.assign(10, 0.0);
    model.model.weights.back() = saw_pos ? 1.0 : -1.0;
    return model;
  }
  model.model = train_hinge(xs, ys, 9, params);
  return model;
}

double context_score(const AppropriatenessModel& model, const ContextFeatureTable& table,
                     const std::vector<std::string>& categories, const ContextSpec& ctx) {
  return model.model.decision(to_sparse(context_feature_vector(table, categories, ctx)));
}

}  // namespace poirec
