// Copyright 2026 The riskcdf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "riskcdf/bounds.hpp"
#include "riskcdf/cdf.hpp"
#include "riskcdf/csv.hpp"
#include "riskcdf/data.hpp"
#include "riskcdf/error.hpp"
#include "riskcdf/optim.hpp"
#include "riskcdf/permcomplexity.hpp"
#include "riskcdf/rng.hpp"

namespace riskcdf::cli {
namespace {

using nlohmann::json;

double ParseNumber(std::string_view text, const std::string& context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kConfigError,
                context + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

bool StartsWith(const std::string& s, std::string_view prefix) {
  return s.rfind(prefix, 0) == 0;
}

void WriteJson(const std::filesystem::path& path, const json& j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

std::string RequireString(const Invocation& inv, const std::string& name) {
  if (!inv.Has(name)) {
    throw Error(ErrorCode::kConfigError,
                inv.command + " needs --" + name);
  }
  return inv.String(name);
}

std::vector<std::size_t> ParseHidden(const std::string& text) {
  std::vector<std::size_t> widths;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double w = ParseNumber(item, "--hidden");
    if (!(w >= 1.0) || w != static_cast<double>(static_cast<std::size_t>(w))) {
      throw Error(ErrorCode::kConfigError, "--hidden: widths must be positive");
    }
    widths.push_back(static_cast<std::size_t>(w));
  }
  if (widths.empty()) {
    throw Error(ErrorCode::kConfigError, "--hidden: need at least one width");
  }
  return widths;
}

LossModel MakeModel(Architecture arch, std::size_t dim,
                    const std::vector<std::size_t>& hidden) {
  switch (arch) {
    case Architecture::kLinearSquared: return LossModel::Linear(dim);
    case Architecture::kLogisticCrossEntropy: return LossModel::Logistic(dim);
    case Architecture::kMlpTanh: return LossModel::Mlp(dim, hidden);
  }
  throw Error(ErrorCode::kConfigError, "unknown architecture");
}

std::string SingleRisk(const Invocation& inv) {
  const auto risks = inv.List("risk");
  if (risks.size() > 1) {
    throw Error(ErrorCode::kConfigError,
                inv.command + " takes a single --risk");
  }
  return risks.empty() ? "mean" : risks.front();
}

std::string RecordsCsv(const MonteCarloEnResult& result) {
  std::ostringstream csv;
  csv << "rep,e_n\n";
  for (std::size_t r = 0; r < result.e_n.size(); ++r) {
    csv << r << ',' << FormatDouble(result.e_n[r]) << '\n';
  }
  return csv.str();
}

}  // namespace

DistortionSpec ParseDistortion(const std::string& spec,
                               const std::string& distortion_file) {
  if (spec == "mean") return DistortionSpec::Identity();
  if (StartsWith(spec, "cvar:")) {
    return DistortionSpec::Cvar(ParseNumber(spec.substr(5), "cvar"));
  }
  if (spec == "distortion") {
    if (distortion_file.empty()) {
      throw Error(ErrorCode::kConfigError,
                  "risk 'distortion' needs --distortion-file");
    }
    return DistortionSpec::FromCsv(distortion_file);
  }
  if (StartsWith(spec, "distortion:")) {
    return DistortionSpec::FromCsv(spec.substr(11));
  }
  throw Error(ErrorCode::kConfigError,
              "unknown distortion '" + spec +
                  "' (expected mean, cvar:A or distortion[:FILE])");
}

RiskValue EvaluateRisk(const std::string& spec, const EmpiricalCdf& cdf,
                       double support_bound, const std::string& distortion_file) {
  if (spec == "mean" || StartsWith(spec, "cvar:") || spec == "distortion" ||
      StartsWith(spec, "distortion:")) {
    return DistortionRisk(cdf, ParseDistortion(spec, distortion_file),
                          support_bound);
  }
  if (StartsWith(spec, "mean_var:")) {
    return MeanVariance(cdf, ParseNumber(spec.substr(9), "mean_var"),
                        support_bound);
  }
  if (StartsWith(spec, "spectral:")) {
    return SpectralRisk(cdf, SpectrumSpec::FromCsv(spec.substr(9)),
                        support_bound);
  }
  for (const std::string prefix : {"oce:", "inverted_oce:"}) {
    if (!StartsWith(spec, prefix)) continue;
    const std::string rest = spec.substr(prefix.size());
    std::optional<OceSpec> oce;
    if (rest == "mean") {
      oce = OceSpec::Mean(support_bound);
    } else if (rest == "entropic") {
      oce = OceSpec::Entropic(1.0, support_bound);
    } else if (StartsWith(rest, "entropic:")) {
      oce = OceSpec::Entropic(ParseNumber(rest.substr(9), spec), support_bound);
    } else if (StartsWith(rest, "cvar:")) {
      oce = OceSpec::Cvar(ParseNumber(rest.substr(5), spec), support_bound);
    } else {
      break;
    }
    return prefix == "oce:" ? OceRisk(cdf, *oce) : InvertedOceRisk(cdf, *oce);
  }
  throw Error(ErrorCode::kConfigError, "unknown risk '" + spec + "'");
}

std::vector<LossModel> FixedLogisticModels(std::size_t count,
                                           std::uint64_t seed) {
  std::vector<LossModel> models;
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng(DeriveSeed(seed, k));
    LossModel model = LossModel::Logistic(2);
    std::vector<double> theta(model.num_parameters());
    for (double& v : theta) v = rng.Gaussian();
    model.set_parameters(theta);
    models.push_back(std::move(model));
  }
  return models;
}

void CmdCdf(const Invocation& inv, const std::filesystem::path& out_dir,
            std::ostream& out) {
  const auto losses = ReadLossVectorCsv(RequireString(inv, "input"),
                                        inv.Flag("header"));
  const auto cdf = EmpiricalCdf::FromLosses(losses);
  std::ostringstream csv;
  WriteCdfCsv(cdf, csv);
  WriteTextFile(out_dir / "cdf.csv", csv.str());
  json moments = json::object();
  for (int k = 1; k <= 4; ++k) moments[std::to_string(k)] = Moment(cdf, k);
  WriteJson(out_dir / "summary.json", {{"n", cdf.size()},
                                       {"min", cdf.min()},
                                       {"max", cdf.max()},
                                       {"distinct_values", cdf.Breakpoints().size()},
                                       {"moments", moments}});
  out << "cdf: n=" << cdf.size() << " breakpoints=" << cdf.Breakpoints().size()
      << '\n';
}

void CmdAssess(const Invocation& inv, const std::filesystem::path& out_dir,
               std::ostream& out) {
  const LossTable table = LoadLossTable(RequireString(inv, "input"));
  auto risks = inv.List("risk");
  if (risks.empty()) risks = {"mean"};
  const std::size_t n = inv.Count("n").value_or(table.num_rows());
  const double delta = inv.Real("delta").value_or(0.05);
  std::vector<EmpiricalCdf> cdfs;
  double data_max = 0.0;
  for (std::size_t m = 0; m < table.models.size(); ++m) {
    cdfs.push_back(table.ColumnCdf(m));
    data_max = std::max(data_max, cdfs.back().max());
  }
  const double support = inv.Real("support-bound").value_or(data_max);
  const std::string distortion_file = inv.String("distortion-file");

  const BoundCertificate cert =
      FiniteClassCertificate(n, table.models.size(), delta);
  json records = json::array();
  std::ostringstream csv;
  csv << "risk";
  for (const auto& name : table.models) csv << ',' << name;
  csv << ",lipschitz,error_bound\n";
  for (const auto& spec : risks) {
    csv << spec;
    double lipschitz = 0.0;
    double error_bound = 0.0;
    for (std::size_t m = 0; m < cdfs.size(); ++m) {
      const RiskValue rv = EvaluateRisk(spec, cdfs[m], support, distortion_file);
      lipschitz = rv.holder.lipschitz;
      error_bound =
          HolderRiskError(rv.holder.lipschitz, rv.holder.exponent, cert.epsilon);
      records.push_back({{"model", table.models[m]},
                         {"risk", spec},
                         {"risk_name", rv.risk_name},
                         {"value", rv.value},
                         {"lipschitz", rv.holder.lipschitz},
                         {"exponent", rv.holder.exponent},
                         {"metric", rv.holder.metric},
                         {"constant_kind", ConstantKindName(rv.holder.kind)},
                         {"error_bound", error_bound},
                         {"excess_risk_bound", ExcessRiskBound(error_bound)}});
      csv << ',' << FormatDouble(rv.value);
    }
    csv << ',' << FormatDouble(lipschitz) << ',' << FormatDouble(error_bound)
        << '\n';
  }
  WriteTextFile(out_dir / "assessment.csv", csv.str());
  WriteJson(out_dir / "assessment.json",
            {{"certificate", CertificateToJson(cert)},
             {"support_bound", support},
             {"models", table.models},
             {"rows", table.num_rows()},
             {"records", records}});
  out << "assess: epsilon=" << FormatDouble(cert.epsilon) << " risks="
      << risks.size() << " models=" << table.models.size() << '\n';
}

void CmdBound(const Invocation& inv, const std::filesystem::path& out_dir,
              std::ostream& out) {
  const BoundMethod method = ParseBoundMethod(RequireString(inv, "method"));
  const auto n_opt = inv.Count("n");
  if (!n_opt) throw Error(ErrorCode::kConfigError, "bound needs --n");
  const std::size_t n = *n_opt;
  const double delta = inv.Real("delta").value_or(0.1);
  auto require_real = [&](const char* name) {
    const auto v = inv.Real(name);
    if (!v) {
      throw Error(ErrorCode::kConfigError, std::string("method ") +
                                               std::string(BoundMethodName(method)) +
                                               " needs --" + name);
    }
    return *v;
  };

  BoundCertificate cert;
  switch (method) {
    case BoundMethod::kFiniteClass: {
      const double size = require_real("class-size");
      if (!(size >= 1.0)) {
        throw Error(ErrorCode::kConfigError, "--class-size must be >= 1");
      }
      cert = FiniteClassCertificate(n, static_cast<std::size_t>(size), delta);
      break;
    }
    case BoundMethod::kPermutation:
      cert = PermutationCertificate(n, require_real("n-pi"), delta);
      break;
    case BoundMethod::kGrowth: {
      const std::string preset = inv.String("preset");
      if (preset == "vc_sauer") {
        cert = VcSauerCertificate(n, require_real("vc-dim"), delta);
      } else if (preset == "finite_class") {
        const double size = require_real("class-size");
        cert = GrowthCertificate(
            n, FiniteClassGrowth(n, static_cast<std::size_t>(size)), delta);
        cert.inputs["class_size"] = size;
      } else if (preset.empty()) {
        cert = GrowthCertificate(n, require_real("growth"), delta);
      } else {
        throw Error(ErrorCode::kConfigError,
                    "unknown growth preset '" + preset + "'");
      }
      break;
    }
    case BoundMethod::kVcSauer:
      cert = VcSauerCertificate(n, require_real("vc-dim"), delta);
      break;
    case BoundMethod::kUserSupplied:
      cert = UserSuppliedCertificate(n, delta, require_real("epsilon"));
      break;
  }
  WriteJson(out_dir / "bound.json", CertificateToJson(cert));
  out << "bound: method=" << BoundMethodName(cert.method)
      << " rademacher_bound=" << FormatDouble(cert.rademacher_bound)
      << " epsilon=" << FormatDouble(cert.epsilon) << '\n';
}

void CmdTrain(const Invocation& inv, const std::filesystem::path& out_dir,
              std::ostream& out) {
  const std::uint64_t seed = inv.Seed();
  Dataset data;
  if (inv.Has("input")) {
    DatasetCsvOptions options;
    options.label_column = inv.String("label-column", "y");
    data = LoadDatasetCsv(inv.String("input"), options);
  } else {
    const std::string preset = inv.String("preset", "blobs");
    if (preset != "blobs") {
      throw Error(ErrorCode::kConfigError,
                  "unknown dataset preset '" + preset + "'");
    }
    data = GenerateBlobs(BlobConfig::ToyPreset(), seed);
  }
  if (data.size() == 0) throw Error(ErrorCode::kEmptySample, "empty dataset");

  const Architecture arch = ParseArchitecture(inv.String("arch", "logistic"));
  const auto hidden = ParseHidden(inv.String("hidden", "8"));
  const LossModel model =
      InitializeUniform(MakeModel(arch, data.feature_dim(), hidden), seed);

  TrainConfig config;
  config.eta = inv.Real("eta");
  config.beta = inv.Real("beta");
  if (!config.eta && !config.beta) config.eta = 0.1;
  config.iterations = inv.Count("iters").value_or(1000);
  config.seed = seed;
  config.distortion = ParseDistortion(SingleRisk(inv), inv.String("distortion-file"));
  config.noise_enabled = !inv.Flag("no-noise");
  config.threads = inv.Threads();

  TrainTrace trace;
  try {
    trace = Train(model, data.examples, config);
  } catch (const DivergedError& e) {
    std::ostringstream csv;
    WriteTraceCsv(e.partial_trace(), csv);
    WriteTextFile(out_dir / "trace.csv", csv.str());
    throw;
  }
  std::ostringstream csv;
  WriteTraceCsv(trace, csv);
  WriteTextFile(out_dir / "trace.csv", csv.str());

  const LossModel trained = model.WithParameters(trace.final_parameters);
  const auto losses = ExampleLosses(trained, data.examples);
  const auto cdf = EmpiricalCdf::FromLosses(losses);
  json checkpoint = {
      {"model", ModelToJson(trained)},
      {"initial_parameters", trace.initial_parameters},
      {"distortion", trace.distortion},
      {"eta", trace.eta},
      {"iterations", config.iterations},
      {"seed", seed},
      {"noise_enabled", trace.noise_enabled},
      {"init", "uniform(-0.5, 0.5)"},
      {"initial_risk", trace.records.front().risk},
      {"final_risk", trace.final_risk},
      {"final_metrics",
       {{"mean", Moment(cdf, 1)},
        {"cvar:0.05", Cvar(cdf, 0.05).value},
        {"max", cdf.max()}}},
      {"data", data.metadata}};
  if (config.beta) checkpoint["beta"] = *config.beta;
  WriteJson(out_dir / "checkpoint.json", checkpoint);

  json stationarity;
  try {
    stationarity = StationarityToJson(Stationarity(trace, config.beta));
  } catch (const Error& e) {
    stationarity = {{"available", false}, {"reason", e.what()}};
  }
  WriteJson(out_dir / "stationarity.json", stationarity);
  out << "train: T=" << config.iterations << " eta=" << FormatDouble(trace.eta)
      << " initial_risk=" << FormatDouble(trace.records.front().risk)
      << " final_risk=" << FormatDouble(trace.final_risk) << '\n';
}

void CmdComplexity(const Invocation& inv, const std::filesystem::path& out_dir,
                   std::ostream& out) {
  const LossMatrix m = LoadLossMatrixCsv(RequireString(inv, "input"));
  const std::string mode = inv.String("mode", "exact");
  PermutationCover cover;
  if (mode == "exact") {
    cover = ExactMinPermutations(m);
  } else if (mode == "greedy") {
    cover = GreedyMinPermutations(m);
  } else {
    throw Error(ErrorCode::kConfigError,
                "--mode must be exact or greedy, got '" + mode + "'");
  }
  json report = CoverToJson(cover);
  report["verified"] = VerifyCover(m, cover.witnesses);
  report["n"] = m.num_points();
  report["hypotheses"] = m.num_hypotheses();
  WriteJson(out_dir / "complexity.json", report);
  out << "complexity: solver=" << CoverSolverName(cover.solver)
      << " value=" << cover.value << '\n';
}

void CmdGradcheck(const Invocation& inv, const std::filesystem::path& out_dir,
                  std::ostream& out) {
  GradCheckOptions options;
  options.architecture = ParseArchitecture(inv.String("arch", "logistic"));
  options.distortion =
      ParseDistortion(SingleRisk(inv), inv.String("distortion-file"));
  options.trials = inv.Count("trials").value_or(100);
  options.seed = inv.Seed();
  if (inv.Has("hidden")) options.hidden = ParseHidden(inv.String("hidden"));
  const GradCheckResult result = DirectionalGradientCheck(options);
  WriteJson(out_dir / "gradcheck.json",
            {{"architecture", std::string(ArchitectureName(options.architecture))},
             {"distortion", options.distortion.name()},
             {"trials", result.trials},
             {"step", options.step},
             {"num_examples", options.num_examples},
             {"redraws", result.redraws},
             {"max_relative_error", result.max_relative_error}});
  out << "gradcheck: " << ArchitectureName(options.architecture) << ' '
      << options.distortion.name()
      << " max_relative_error=" << FormatDouble(result.max_relative_error)
      << '\n';
}

void CmdMonteCarlo(const Invocation& inv, const std::filesystem::path& out_dir,
                   std::ostream& out) {
  MonteCarloEnOptions options;
  options.n = inv.Count("n").value_or(options.n);
  options.reps = inv.Count("reps").value_or(options.reps);
  options.reference_size =
      inv.Count("reference-size").value_or(options.reference_size);
  options.delta = inv.Real("delta").value_or(options.delta);
  options.seed = inv.Seed();
  options.threads = inv.Threads();
  const std::size_t class_size = inv.Count("class-size").value_or(5);

  const auto models =
      FixedLogisticModels(class_size, DeriveSeed(options.seed, "hypotheses"));
  std::vector<ExampleLoss> hypotheses;
  for (const auto& m : models) hypotheses.push_back(AsExampleLoss(m));
  const MonteCarloEnResult result = MonteCarloEn(
      hypotheses, BlobMixtureGenerator(BlobConfig::ToyPreset()), options);
  const BoundCertificate cert =
      FiniteClassCertificate(options.n, class_size, options.delta);

  WriteTextFile(out_dir / "e_n.csv", RecordsCsv(result));
  json params = json::array();
  for (const auto& m : models) params.push_back(ModelToJson(m));
  WriteJson(out_dir / "montecarlo.json",
            {{"certificate", CertificateToJson(cert)},
             {"reps", options.reps},
             {"reference_size", options.reference_size},
             {"median_e_n", result.median},
             {"upper_quantile_e_n", result.upper_quantile},
             {"violation_fraction", result.ViolationFraction(cert.epsilon)},
             {"warnings", result.warnings},
             {"hypotheses", params}});
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << "montecarlo: median_e_n=" << FormatDouble(result.median)
      << " epsilon=" << FormatDouble(cert.epsilon) << " violation_fraction="
      << FormatDouble(result.ViolationFraction(cert.epsilon)) << '\n';
}

}  // namespace riskcdf::cli
