#include "refint/pipeline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "refint/errors.hpp"
#include "refint/partition.hpp"

namespace refint {

void RunConfig::validate() const {
  if (eliminations.empty()) throw PreconditionError("run config: no elimination procedure");
  if (methods.empty()) throw PreconditionError("run config: no calculation method");
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("run config: alpha outside (0, 1)");
  if (cuts.empty()) {
    if (width <= 0) throw PreconditionError("run config: width must be positive");
    if (max_age <= 0) throw PreconditionError("run config: max_age must be positive");
  } else {
    if (cuts.size() < 2) throw PreconditionError("run config: need at least two cut points");
    if (cuts.front() < 0 || !std::is_sorted(cuts.begin(), cuts.end()) ||
        std::adjacent_find(cuts.begin(), cuts.end()) != cuts.end()) {
      throw PreconditionError("run config: cuts must be strictly increasing and >= 0");
    }
  }
}

std::vector<int> RunConfig::age_cuts() const {
  if (!cuts.empty()) return cuts;
  return partition::uniform_cuts(width, max_age);
}

PreparedSegment prepare_segment(Segment segment, const RunConfig& config) {
  PreparedSegment prepared;
  prepared.segment = std::move(segment);
  const auto& values = prepared.segment.values;
  if (values.empty()) {
    prepared.error = "empty_segment";
    return prepared;
  }
  prepared.summary = stats::summarize(values);
  try {
    prepared.normalized =
        transform::normalize_if_needed(values, config.alpha, config.transform, config.skew_test);
  } catch (const Error& e) {
    prepared.error = std::string("transform: ") + e.what();
  }
  return prepared;
}

namespace {

void add_normality(std::map<std::string, double>& out, const std::string& prefix,
                   const stats::NormalityReport& report) {
  out[prefix + "ad_stat"] = report.anderson_darling.statistic;
  out[prefix + "ad_p"] = report.anderson_darling.p_value.value_or(0.0);
  out[prefix + "ks_stat"] = report.kolmogorov_smirnov.statistic;
  out[prefix + "ks_crit"] = report.kolmogorov_smirnov.critical_value.value_or(0.0);
  out[prefix + "skew_z"] = report.skewness.statistic;
  out[prefix + "skew_p"] = report.skewness.p_value.value_or(0.0);
  out[prefix + "normal"] = report.normal ? 1.0 : 0.0;
}

std::map<std::string, double> normality_map(const transform::NormalizedSegment& normalized) {
  std::map<std::string, double> out;
  if (normalized.before) add_normality(out, "gate_", *normalized.before);
  if (normalized.after) add_normality(out, "post_", *normalized.after);
  return out;
}

// Result of applying one elimination procedure to a prepared segment.
struct Eliminated {
  std::size_t n_eliminated = 0;
  std::vector<double> analysis;  // retained, analysis scale
  std::vector<double> original;  // retained, original scale
  TransformSpec spec;
  std::vector<std::string> flags;
  std::optional<std::string> error;
};

Eliminated eliminate(const PreparedSegment& prepared, Elimination elimination,
                     const RunConfig& config) {
  Eliminated out;
  out.spec = prepared.normalized.spec;
  const auto& analysis = prepared.normalized.values;
  EliminationResult result;
  try {
    switch (elimination) {
      case Elimination::none:
        result = outlier::no_elimination(analysis);
        break;
      case Elimination::tukey:
        result = outlier::tukey_eliminate(analysis, {config.fence_coefficient});
        break;
      case Elimination::block_dr:
        result = outlier::block_dr_eliminate(analysis, {config.dr_cutoff, config.dr_iterate});
        break;
    }
  } catch (const Error& e) {
    out.error = std::string("elimination: ") + e.what();
    return out;
  }
  out.flags = result.flags;
  out.n_eliminated = result.n_eliminated();
  out.analysis = result.retained();

  // The transform is strictly increasing, so the retained values are the
  // same contiguous block of the sorted original values.
  std::vector<double> sorted(prepared.segment.values);
  std::sort(sorted.begin(), sorted.end());
  const auto first = result.eliminated_low().size();
  const auto last = sorted.size() - result.eliminated_high().size();
  out.original.assign(sorted.begin() + static_cast<std::ptrdiff_t>(first),
                      sorted.begin() + static_cast<std::ptrdiff_t>(last));

  if (config.refit_after_elimination && out.spec.applied && out.original.size() >= 10) {
    try {
      const double lo = out.original.front();
      out.spec = transform::boxcox_fit(out.original, lo <= 0.0);
      out.analysis = transform::boxcox_apply(out.original, out.spec);
      out.flags.emplace_back("refit");
    } catch (const Error& e) {
      out.error = std::string("refit: ") + e.what();
    }
  }
  return out;
}

std::size_t min_n(Method method) {
  switch (method) {
    case Method::parametric: return 2;
    case Method::nonparametric: return estimate::kNonparametricMinN;
    case Method::robust: return 3;
  }
  return 2;
}

// Maps analysis-scale endpoints back to concentrations.
void back_transform(IntervalRecord& record, const TransformSpec& spec, double lower,
                    double upper) {
  double lo = 0.0;
  try {
    lo = transform::boxcox_inverse(lower, spec);
  } catch (const DomainError&) {
    // Below the image of the transform: the limit is y = -lambda2.
    lo = -spec.lambda2;
    record.flags.emplace_back("lower_out_of_domain");
  }
  double hi = 0.0;
  try {
    hi = transform::boxcox_inverse(upper, spec);
  } catch (const DomainError&) {
    record.error = "upper endpoint outside the back-transform domain";
    return;
  }
  if (!std::isfinite(hi)) {
    record.error = "upper endpoint overflowed on back-transform";
    return;
  }
  record.lower = lo;
  record.upper = hi;
}

IntervalRecord estimate_cell(const PreparedSegment& prepared, const Eliminated& elim,
                             Elimination elimination, Method method, const RunConfig& config) {
  IntervalRecord record;
  record.segment = prepared.segment.label;
  record.n_input = prepared.segment.values.size();
  record.elimination = elimination;
  record.method = method;
  record.transform = elim.spec;
  record.diagnostics = normality_map(prepared.normalized);
  record.flags = prepared.normalized.warnings;

  if (prepared.error) {
    record.error = prepared.error;
    return record;
  }
  if (elim.error) {
    record.error = elim.error;
    return record;
  }
  record.n_eliminated = elim.n_eliminated;
  record.flags.insert(record.flags.end(), elim.flags.begin(), elim.flags.end());
  const std::size_t n_used = elim.analysis.size();
  record.diagnostics["n_used"] = static_cast<double>(n_used);
  if (n_used < min_n(method)) {
    record.error = std::string("insufficient_data: ") + std::string(to_string(method)) +
                   " requires n >= " + std::to_string(min_n(method));
    return record;
  }

  try {
    switch (method) {
      case Method::parametric: {
        const auto iv = estimate::parametric_interval(elim.analysis);
        record.diagnostics["analysis_lower"] = iv.lower;
        record.diagnostics["analysis_upper"] = iv.upper;
        if (iv.degenerate) record.flags.emplace_back("degenerate");
        back_transform(record, elim.spec, iv.lower, iv.upper);
        break;
      }
      case Method::robust: {
        const auto r = estimate::robust_interval(
            elim.analysis, {{config.c, 1e-5, 1e-12, 500}, config.scale_tuning});
        record.diagnostics["analysis_lower"] = r.interval.lower;
        record.diagnostics["analysis_upper"] = r.interval.upper;
        record.diagnostics["t_bi"] = r.fit.t_bi;
        record.diagnostics["s_bi"] = r.fit.s_bi;
        record.diagnostics["s_t"] = r.fit.s_t;
        record.diagnostics["iterations"] = r.fit.iterations;
        record.diagnostics["final_delta"] = r.fit.final_delta;
        record.diagnostics["t_quantile"] = r.t_quantile;
        if (r.interval.degenerate) record.flags.emplace_back("degenerate");
        if (!r.fit.degenerate && !r.fit.converged) record.flags.emplace_back("max_iter_reached");
        back_transform(record, elim.spec, r.interval.lower, r.interval.upper);
        break;
      }
      case Method::nonparametric: {
        const auto iv = estimate::nonparametric_interval(elim.original);
#ifndef NDEBUG
        if (elim.spec.applied) {
          std::vector<double> round_trip;
          round_trip.reserve(elim.analysis.size());
          for (double t : elim.analysis) round_trip.push_back(transform::boxcox_inverse(t, elim.spec));
          const auto check = estimate::nonparametric_interval(round_trip);
          const double scale = std::max({1.0, std::abs(iv.lower), std::abs(iv.upper)});
          assert(std::abs(check.lower - iv.lower) <= 1e-8 * scale);
          assert(std::abs(check.upper - iv.upper) <= 1e-8 * scale);
        }
#endif
        if (n_used < estimate::kNonparametricRecommendedN) record.flags.emplace_back("small_sample");
        if (iv.degenerate) record.flags.emplace_back("degenerate");
        record.lower = iv.lower;
        record.upper = iv.upper;
        break;
      }
    }
  } catch (const Error& e) {
    record.error = e.what();
  }
  if (record.error) {
    record.lower.reset();
    record.upper.reset();
    return record;
  }
  if (*record.lower < 0.0) {
    record.lower = 0.0;
    record.flags.emplace_back("lower_clamped");
  }
  return record;
}

}  // namespace

IntervalRecord run_cell(const PreparedSegment& prepared, Elimination elimination, Method method,
                        const RunConfig& config) {
  const Eliminated elim = prepared.error ? Eliminated{} : eliminate(prepared, elimination, config);
  return estimate_cell(prepared, elim, elimination, method, config);
}

IntervalRecord run_cell(const Segment& segment, Elimination elimination, Method method,
                        const RunConfig& config) {
  return run_cell(prepare_segment(segment, config), elimination, method, config);
}

std::vector<IntervalRecord> ReportTable::records() const {
  std::vector<IntervalRecord> out;
  for (const auto& seg : segments) {
    for (const auto& row : seg.eliminations) {
      out.insert(out.end(), row.records.begin(), row.records.end());
    }
  }
  return out;
}

bool ReportTable::has_errors() const {
  for (const auto& seg : segments) {
    for (const auto& row : seg.eliminations) {
      for (const auto& rec : row.records) {
        if (rec.error) return true;
      }
    }
  }
  return false;
}

ReportTable run_matrix(const Cohort& cohort, const RunConfig& config) {
  config.validate();
  ReportTable table;
  table.metadata.config = config;

  std::vector<SexFilter> sexes = {SexFilter::both};
  if (config.sex == SexHandling::by_sex) sexes = {SexFilter::female, SexFilter::male};

  const auto cuts = config.age_cuts();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    for (SexFilter sex : sexes) {
      const SegmentLabel label{{cuts[i], cuts[i + 1]}, sex};
      const auto prepared = prepare_segment(make_segment(cohort, label), config);

      SegmentReport report;
      report.label = label;
      report.n = prepared.segment.values.size();
      report.summary = prepared.summary;
      report.transform = prepared.normalized.spec;
      report.normality = normality_map(prepared.normalized);
      report.warnings = prepared.normalized.warnings;
      if (prepared.error) report.warnings.push_back(*prepared.error);

      for (Elimination elimination : config.eliminations) {
        EliminationRow row;
        row.procedure = elimination;
        const Eliminated elim =
            prepared.error ? Eliminated{} : eliminate(prepared, elimination, config);
        row.n_eliminated = elim.n_eliminated;
        for (Method method : config.methods) {
          row.records.push_back(estimate_cell(prepared, elim, elimination, method, config));
        }
        report.eliminations.push_back(std::move(row));
      }
      table.segments.push_back(std::move(report));
    }
  }
  return table;
}

}  // namespace refint
