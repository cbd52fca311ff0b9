#include "refint/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "refint/errors.hpp"
#include "refint/ingest.hpp"
#include "refint/partition.hpp"
#include "refint/pipeline.hpp"
#include "refint/synth.hpp"

namespace refint::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct InputOptions {
  std::string path;
  ColumnSchema schema;
  std::string id_col;
  std::string delimiter = ",";
  int max_age = 100;
};

void add_input_options(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("--input", in.path, "CSV file with one row per result")->required();
  cmd.add_option("--age-col", in.schema.age, "Age column")->capture_default_str();
  cmd.add_option("--sex-col", in.schema.sex, "Sex column")->capture_default_str();
  cmd.add_option("--value-col", in.schema.value, "Analyte value column")->capture_default_str();
  cmd.add_option("--id-col", in.id_col, "Subject id column");
  cmd.add_flag("--strict-sex", in.schema.strict_sex, "Exclude rows with unknown sex codes");
  cmd.add_option("--delimiter", in.delimiter, "Field delimiter")->capture_default_str();
  cmd.add_option("--max-age", in.max_age, "Exclude ages at or above this")->capture_default_str();
}

Cohort load(InputOptions in, std::ostream& err) {
  if (in.delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
  if (!in.id_col.empty()) in.schema.id = in.id_col;
  auto cohort = read_cohort_file(in.path, in.schema, in.delimiter[0]);
  cohort = apply_exclusions(std::move(cohort), ExclusionRules{in.max_age});
  if (cohort.observations.empty()) throw InputError("no observations left after exclusions");
  err << cohort.input_rows() << " rows read, " << cohort.exclusion_log.size() << " excluded\n";
  return cohort;
}

template <typename T>
std::vector<T> parse_list(const std::vector<std::string>& names,
                          std::optional<T> (*parse)(std::string_view), const char* flag) {
  std::vector<T> out;
  for (const auto& name : names) {
    auto v = parse(name);
    if (!v) throw UsageError(std::string(flag) + ": unknown value '" + name + "'");
    if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
  }
  return out;
}

std::optional<transform::TransformPolicy> parse_policy(std::string_view s) {
  if (s == "auto") return transform::TransformPolicy::automatic;
  if (s == "force") return transform::TransformPolicy::force;
  if (s == "off") return transform::TransformPolicy::off;
  return std::nullopt;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw InputError("write to '" + path + "' failed");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string scan_csv(const std::vector<partition::ScanGroup>& groups) {
  std::ostringstream os;
  os << "scheme,kind,first,second,n1,n2,z,z_star,sd_ratio,partition_required\n";
  for (const auto& g : groups) {
    for (const auto& d : g.decisions) {
      os << g.scheme.name << ',' << (d.kind == partition::Comparison::age ? "age" : "sex") << ','
         << d.first.to_string() << ',' << d.second.to_string() << ',' << d.n1 << ',' << d.n2
         << ',' << fmt(d.z) << ',' << fmt(d.z_star) << ',' << fmt(d.sd_ratio) << ','
         << (d.partition_required ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

std::string scan_json(const std::vector<partition::ScanGroup>& groups) {
  using Json = nlohmann::ordered_json;
  Json root = Json::array();
  for (const auto& g : groups) {
    Json jg;
    jg["scheme"] = g.scheme.name;
    jg["cuts"] = g.scheme.cuts;
    jg["flagged"] = g.flagged();
    jg["warnings"] = g.warnings;
    Json decisions = Json::array();
    for (const auto& d : g.decisions) {
      decisions.push_back({{"kind", d.kind == partition::Comparison::age ? "age" : "sex"},
                           {"first", d.first.to_string()},
                           {"second", d.second.to_string()},
                           {"n1", d.n1},
                           {"n2", d.n2},
                           {"z", d.z},
                           {"z_star", d.z_star},
                           {"sd_ratio", d.sd_ratio},
                           {"partition_required", d.partition_required}});
    }
    jg["decisions"] = std::move(decisions);
    root.push_back(std::move(jg));
  }
  return root.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reference interval estimation for age-structured laboratory data", "refint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  // run
  InputOptions run_in;
  int width = 10;
  std::vector<int> cuts;
  bool by_sex = false;
  std::vector<std::string> elim_names = {"none", "tukey", "dr"};
  std::vector<std::string> method_names = {"para", "nonpara", "robust"};
  std::string transform_name = "auto";
  std::string skew_name = "dagostino";
  std::string format = "json";
  std::string out_path;
  std::optional<std::uint64_t> run_seed;
  RunConfig config;
  bool dr_one_shot = false;

  auto* run_cmd = app.add_subcommand("run", "Compute the interval matrix for every age/sex segment");
  add_input_options(*run_cmd, run_in);
  auto* width_opt = run_cmd->add_option("--width", width, "Uniform age cell width")
                        ->capture_default_str();
  run_cmd->add_option("--cuts", cuts, "Explicit age cut points, e.g. 0,10,20")
      ->delimiter(',')
      ->excludes(width_opt);
  run_cmd->add_flag("--by-sex", by_sex, "Split every age cell by sex");
  run_cmd->add_option("--elim", elim_names, "Elimination procedures: none,tukey,dr")
      ->delimiter(',');
  run_cmd->add_option("--methods", method_names, "Methods: para,nonpara,robust")->delimiter(',');
  run_cmd->add_option("--alpha", config.alpha, "Normality test level")->capture_default_str();
  run_cmd->add_option("--transform", transform_name, "Box-Cox policy: auto|force|off")
      ->capture_default_str();
  run_cmd->add_option("--skew-test", skew_name, "Skewness test: dagostino|large_sample")
      ->capture_default_str();
  run_cmd->add_option("--c", config.c, "Biweight tuning constant")->capture_default_str();
  run_cmd->add_option("--scale-tuning", config.scale_tuning, "Biweight scale tuning constant")
      ->capture_default_str();
  run_cmd->add_option("--fence", config.fence_coefficient, "Tukey fence coefficient")
      ->capture_default_str();
  run_cmd->add_option("--dr-cutoff", config.dr_cutoff, "Dixon/Reed D/R cutoff")
      ->capture_default_str();
  run_cmd->add_flag("--dr-one-shot", dr_one_shot, "Test each D/R tail once");
  run_cmd->add_flag("--refit", config.refit_after_elimination,
                    "Refit Box-Cox on the retained values");
  run_cmd->add_option("--seed", run_seed, "Seed of the synthetic input, echoed in metadata");
  run_cmd->add_option("--out", out_path, "Output file (stdout when omitted)");
  run_cmd->add_option("--format", format, "json|csv|plotdata")->capture_default_str();

  // partition-scan
  InputOptions scan_in;
  partition::ScanOptions scan;
  std::string scan_format = "csv";
  std::string scan_out;
  auto* scan_cmd =
      app.add_subcommand("partition-scan", "Harris-Boyd age/sex partition scan over cell widths");
  add_input_options(*scan_cmd, scan_in);
  scan_cmd->add_option("--widths", scan.widths, "Cell widths in years")->delimiter(',');
  scan_cmd->add_flag("--nonuniform", scan.include_nonuniform,
                     "Add the yearly-to-15 then 20-year scheme");
  scan_cmd->add_flag("--by-sex", scan.per_sex, "Scan within each sex and compare F with M");
  scan_cmd->add_flag("--all-pairs", scan.all_pairs, "Compare every pair of cells");
  scan_cmd->add_flag("--sd-ratio", scan.harris_boyd.use_sd_ratio,
                     "Also flag pairs whose SD ratio exceeds the limit");
  scan_cmd->add_option("--out", scan_out, "Output file (stdout when omitted)");
  scan_cmd->add_option("--format", scan_format, "csv|json")->capture_default_str();

  // synth
  std::string profile_name = "iga";
  std::optional<std::size_t> n_per_group;
  std::uint64_t seed = 1;
  std::string synth_out;
  bool dump_profile = false;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic cohort");
  synth_cmd->add_option("--profile", profile_name, "iga or a profile file")->capture_default_str();
  synth_cmd->add_option("--n-per-group", n_per_group, "Override every group's count");
  synth_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output file (stdout when omitted)");
  synth_cmd->add_flag("--dump-profile", dump_profile,
                      "Write the resolved profile instead of a cohort");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*run_cmd) {
      config.eliminations = parse_list(elim_names, &parse_elimination, "--elim");
      config.methods = parse_list(method_names, &parse_method, "--methods");
      const auto policy = parse_policy(transform_name);
      if (!policy) throw UsageError("--transform: unknown value '" + transform_name + "'");
      config.transform = *policy;
      if (skew_name == "dagostino") {
        config.skew_test = stats::SkewTest::dagostino;
      } else if (skew_name == "large_sample") {
        config.skew_test = stats::SkewTest::large_sample;
      } else {
        throw UsageError("--skew-test: unknown value '" + skew_name + "'");
      }
      const auto report_format = parse_report_format(format);
      if (!report_format) throw UsageError("--format: unknown value '" + format + "'");
      config.width = width;
      config.cuts = cuts;
      config.max_age = run_in.max_age;
      config.sex = by_sex ? SexHandling::by_sex : SexHandling::pooled;
      config.dr_iterate = !dr_one_shot;
      config.seed = run_seed;
      config.validate();

      const auto cohort = load(run_in, err);
      const auto table = run_matrix(cohort, config);
      emit(emit_report(table, *report_format), out_path, out);
      if (table.has_errors()) {
        std::size_t failed = 0;
        for (const auto& r : table.records()) failed += r.ok() ? 0 : 1;
        err << failed << " cell(s) could not be computed\n";
        return kPartial;
      }
      return kSuccess;
    }
    if (*scan_cmd) {
      if (scan_format != "csv" && scan_format != "json") {
        throw UsageError("--format: unknown value '" + scan_format + "'");
      }
      const auto cohort = load(scan_in, err);
      const auto groups = partition::scan_partitions(cohort, scan);
      for (const auto& g : groups) {
        for (const auto& w : g.warnings) err << g.scheme.name << ": " << w << '\n';
      }
      emit(scan_format == "csv" ? scan_csv(groups) : scan_json(groups), scan_out, out);
      return kSuccess;
    }
    if (*synth_cmd) {
      const auto profile = synth::resolve_profile(profile_name);
      std::ostringstream os;
      if (dump_profile) {
        synth::write_profile(os, profile);
      } else {
        write_cohort_csv(os, synth::generate(profile, seed, n_per_group));
      }
      emit(os.str(), synth_out, out);
      return kSuccess;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kUsageError;
}

}  // namespace refint::cli
