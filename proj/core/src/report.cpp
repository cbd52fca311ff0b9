#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "refint/errors.hpp"
#include "refint/pipeline.hpp"

namespace refint {

using Json = nlohmann::ordered_json;

namespace {

template <typename E>
E enum_from(const Json& j, std::optional<E> (*parse)(std::string_view), const char* what) {
  const auto text = j.get<std::string>();
  if (auto v = parse(text)) return *v;
  throw InputError(std::string("report: unknown ") + what + " '" + text + "'");
}

std::optional<transform::TransformPolicy> parse_policy(std::string_view s) {
  if (s == "auto") return transform::TransformPolicy::automatic;
  if (s == "force") return transform::TransformPolicy::force;
  if (s == "off") return transform::TransformPolicy::off;
  return std::nullopt;
}

std::string_view policy_name(transform::TransformPolicy p) {
  switch (p) {
    case transform::TransformPolicy::automatic: return "auto";
    case transform::TransformPolicy::force: return "force";
    case transform::TransformPolicy::off: return "off";
  }
  return "auto";
}

std::optional<stats::SkewTest> parse_skew(std::string_view s) {
  if (s == "dagostino") return stats::SkewTest::dagostino;
  if (s == "large_sample") return stats::SkewTest::large_sample;
  return std::nullopt;
}

std::string_view skew_name(stats::SkewTest t) {
  return t == stats::SkewTest::dagostino ? "dagostino" : "large_sample";
}

std::optional<SexHandling> parse_sex_handling(std::string_view s) {
  if (s == "pooled") return SexHandling::pooled;
  if (s == "by_sex") return SexHandling::by_sex;
  return std::nullopt;
}

Json to_json(const SegmentLabel& label) {
  return Json{{"age_lo", label.ages.lo},
              {"age_hi", label.ages.hi},
              {"sex", std::string(to_string(label.sex))}};
}

SegmentLabel label_from(const Json& j) {
  return {{j.at("age_lo").get<int>(), j.at("age_hi").get<int>()},
          enum_from<SexFilter>(j.at("sex"), parse_sex_filter, "sex filter")};
}

Json to_json(const TransformSpec& t) {
  Json j{{"applied", t.applied}, {"lambda1", t.lambda1}, {"lambda2", t.lambda2}};
  j["loglik"] = t.loglik ? Json(*t.loglik) : Json(nullptr);
  return j;
}

TransformSpec transform_from(const Json& j) {
  TransformSpec t;
  t.applied = j.at("applied").get<bool>();
  t.lambda1 = j.at("lambda1").get<double>();
  t.lambda2 = j.at("lambda2").get<double>();
  if (!j.at("loglik").is_null()) t.loglik = j.at("loglik").get<double>();
  return t;
}

Json to_json(const SummaryStats& s) {
  return Json{{"n", s.n},       {"mean", s.mean}, {"sd", s.sd},
              {"median", s.median}, {"mad", s.mad},   {"q1", s.q1},
              {"q3", s.q3},     {"skewness", s.skewness}, {"min", s.min},
              {"max", s.max}};
}

SummaryStats summary_from(const Json& j) {
  SummaryStats s;
  s.n = j.at("n").get<std::size_t>();
  s.mean = j.at("mean").get<double>();
  s.sd = j.at("sd").get<double>();
  s.median = j.at("median").get<double>();
  s.mad = j.at("mad").get<double>();
  s.q1 = j.at("q1").get<double>();
  s.q3 = j.at("q3").get<double>();
  s.skewness = j.at("skewness").get<double>();
  s.min = j.at("min").get<double>();
  s.max = j.at("max").get<double>();
  return s;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_number_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json to_json(const IntervalRecord& r) {
  Json j;
  j["segment"] = to_json(r.segment);
  j["n_input"] = r.n_input;
  j["elimination"] = std::string(to_string(r.elimination));
  j["n_eliminated"] = r.n_eliminated;
  j["method"] = std::string(to_string(r.method));
  j["lower"] = optional_number(r.lower);
  j["upper"] = optional_number(r.upper);
  j["transform"] = to_json(r.transform);
  j["diagnostics"] = Json(r.diagnostics);
  j["flags"] = Json(r.flags);
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
  return j;
}

IntervalRecord record_from(const Json& j) {
  IntervalRecord r;
  r.segment = label_from(j.at("segment"));
  r.n_input = j.at("n_input").get<std::size_t>();
  r.elimination = enum_from<Elimination>(j.at("elimination"), parse_elimination, "elimination");
  r.n_eliminated = j.at("n_eliminated").get<std::size_t>();
  r.method = enum_from<Method>(j.at("method"), parse_method, "method");
  r.lower = optional_number_from(j.at("lower"));
  r.upper = optional_number_from(j.at("upper"));
  r.transform = transform_from(j.at("transform"));
  r.diagnostics = j.at("diagnostics").get<std::map<std::string, double>>();
  r.flags = j.at("flags").get<std::vector<std::string>>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  return r;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["width"] = c.width;
  j["cuts"] = c.cuts;
  j["max_age"] = c.max_age;
  j["sex"] = c.sex == SexHandling::pooled ? "pooled" : "by_sex";
  Json elims = Json::array();
  for (auto e : c.eliminations) elims.push_back(std::string(to_string(e)));
  j["eliminations"] = elims;
  Json methods = Json::array();
  for (auto m : c.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  j["alpha"] = c.alpha;
  j["transform"] = std::string(policy_name(c.transform));
  j["skew_test"] = std::string(skew_name(c.skew_test));
  j["c"] = c.c;
  j["scale_tuning"] = c.scale_tuning;
  j["fence_coefficient"] = c.fence_coefficient;
  j["dr_cutoff"] = c.dr_cutoff;
  j["dr_iterate"] = c.dr_iterate;
  j["refit_after_elimination"] = c.refit_after_elimination;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  return j;
}

RunConfig config_from(const Json& j) {
  RunConfig c;
  c.width = j.at("width").get<int>();
  c.cuts = j.at("cuts").get<std::vector<int>>();
  c.max_age = j.at("max_age").get<int>();
  c.sex = enum_from<SexHandling>(j.at("sex"), parse_sex_handling, "sex handling");
  c.eliminations.clear();
  for (const auto& e : j.at("eliminations")) {
    c.eliminations.push_back(enum_from<Elimination>(e, parse_elimination, "elimination"));
  }
  c.methods.clear();
  for (const auto& m : j.at("methods")) {
    c.methods.push_back(enum_from<Method>(m, parse_method, "method"));
  }
  c.alpha = j.at("alpha").get<double>();
  c.transform = enum_from<transform::TransformPolicy>(j.at("transform"), parse_policy, "policy");
  c.skew_test = enum_from<stats::SkewTest>(j.at("skew_test"), parse_skew, "skew test");
  c.c = j.at("c").get<double>();
  c.scale_tuning = j.at("scale_tuning").get<double>();
  c.fence_coefficient = j.at("fence_coefficient").get<double>();
  c.dr_cutoff = j.at("dr_cutoff").get<double>();
  c.dr_iterate = j.at("dr_iterate").get<bool>();
  c.refit_after_elimination = j.at("refit_after_elimination").get<bool>();
  if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

Json to_json(const ReportTable& table) {
  Json j;
  const auto& m = table.metadata;
  j["metadata"] = Json{{"engine", m.engine},
                       {"version", m.version},
                       {"quantile_convention", m.quantile_convention},
                       {"rng", m.rng},
                       {"config", to_json(m.config)}};
  Json segments = Json::array();
  for (const auto& seg : table.segments) {
    Json s;
    s["label"] = to_json(seg.label);
    s["n"] = seg.n;
    s["summary"] = seg.summary ? to_json(*seg.summary) : Json(nullptr);
    s["transform"] = to_json(seg.transform);
    s["normality"] = Json(seg.normality);
    s["warnings"] = Json(seg.warnings);
    Json rows = Json::array();
    for (const auto& row : seg.eliminations) {
      Json records = Json::array();
      for (const auto& rec : row.records) records.push_back(to_json(rec));
      rows.push_back(Json{{"procedure", std::string(to_string(row.procedure))},
                          {"n_eliminated", row.n_eliminated},
                          {"records", records}});
    }
    s["eliminations"] = rows;
    segments.push_back(std::move(s));
  }
  j["segments"] = segments;
  return j;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_csv(const ReportTable& table) {
  std::ostringstream out;
  out << "segment,sex,n,elimination,n_eliminated,method,lower,upper,"
         "transform_applied,lambda1,lambda2,flags,error\n";
  for (const auto& rec : table.records()) {
    std::string flags;
    for (const auto& f : rec.flags) flags += (flags.empty() ? "" : ";") + f;
    out << rec.segment.ages.label() << ',' << to_string(rec.segment.sex) << ',' << rec.n_input
        << ',' << to_string(rec.elimination) << ',' << rec.n_eliminated << ','
        << to_string(rec.method) << ',' << (rec.lower ? fixed3(*rec.lower) : "") << ','
        << (rec.upper ? fixed3(*rec.upper) : "") << ',' << (rec.transform.applied ? 1 : 0)
        << ',' << fixed3(rec.transform.lambda1) << ',' << fixed3(rec.transform.lambda2) << ','
        << csv_escape(flags) << ',' << csv_escape(rec.error.value_or("")) << '\n';
  }
  return out.str();
}

std::string emit_plotdata(const ReportTable& table) {
  Json intervals = Json::array();
  Json boxplots = Json::array();
  for (const auto& seg : table.segments) {
    if (seg.summary) {
      const auto& s = *seg.summary;
      const double iqr = s.q3 - s.q1;
      boxplots.push_back(Json{{"segment", to_json(seg.label)},
                              {"n", s.n},
                              {"min", s.min},
                              {"q1", s.q1},
                              {"median", s.median},
                              {"q3", s.q3},
                              {"max", s.max},
                              {"mean", s.mean},
                              {"whisker_low", std::max(s.min, s.q1 - 1.5 * iqr)},
                              {"whisker_high", std::min(s.max, s.q3 + 1.5 * iqr)}});
    }
    for (const auto& row : seg.eliminations) {
      for (const auto& rec : row.records) {
        if (!rec.lower || !rec.upper) continue;
        intervals.push_back(Json{{"segment", to_json(rec.segment)},
                                 {"elimination", std::string(to_string(rec.elimination))},
                                 {"method", std::string(to_string(rec.method))},
                                 {"lower", *rec.lower},
                                 {"upper", *rec.upper},
                                 {"midpoint", 0.5 * (*rec.lower + *rec.upper)},
                                 {"width", *rec.upper - *rec.lower}});
      }
    }
  }
  return Json{{"intervals", intervals}, {"boxplots", boxplots}}.dump(2) + "\n";
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "plotdata") return ReportFormat::plotdata;
  return std::nullopt;
}

std::string emit_report(const ReportTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return to_json(table).dump(2) + "\n";
    case ReportFormat::csv: return emit_csv(table);
    case ReportFormat::plotdata: return emit_plotdata(table);
  }
  throw PreconditionError("emit_report: unknown format");
}

std::string emit_report(const ReportTable& table, std::string_view format) {
  const auto parsed = parse_report_format(format);
  if (!parsed) throw PreconditionError("emit_report: unknown format '" + std::string(format) + "'");
  return emit_report(table, *parsed);
}

ReportTable parse_report_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("report: invalid json: ") + e.what());
  }
  try {
    ReportTable table;
    const auto& m = j.at("metadata");
    table.metadata.engine = m.at("engine").get<std::string>();
    table.metadata.version = m.at("version").get<std::string>();
    table.metadata.quantile_convention = m.at("quantile_convention").get<std::string>();
    table.metadata.rng = m.at("rng").get<std::string>();
    table.metadata.config = config_from(m.at("config"));
    for (const auto& s : j.at("segments")) {
      SegmentReport seg;
      seg.label = label_from(s.at("label"));
      seg.n = s.at("n").get<std::size_t>();
      if (!s.at("summary").is_null()) seg.summary = summary_from(s.at("summary"));
      seg.transform = transform_from(s.at("transform"));
      seg.normality = s.at("normality").get<std::map<std::string, double>>();
      seg.warnings = s.at("warnings").get<std::vector<std::string>>();
      for (const auto& r : s.at("eliminations")) {
        EliminationRow row;
        row.procedure =
            enum_from<Elimination>(r.at("procedure"), parse_elimination, "elimination");
        row.n_eliminated = r.at("n_eliminated").get<std::size_t>();
        for (const auto& rec : r.at("records")) row.records.push_back(record_from(rec));
        seg.eliminations.push_back(std::move(row));
      }
      table.segments.push_back(std::move(seg));
    }
    return table;
  } catch (const Json::exception& e) {
    throw InputError(std::string("report: malformed json: ") + e.what());
  }
}

}  // namespace refint
