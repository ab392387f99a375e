#include "opuc/serialize.hpp"

#include <cstdio>

#include "opuc/errors.hpp"

namespace opuc {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError("complex values serialize as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

json complex_list_to_json(const std::vector<cplx>& values) {
  json out = json::array();
  for (const cplx& v : values) out.push_back(complex_to_json(v));
  return out;
}

std::vector<cplx> complex_list_from_json(const json& j) {
  std::vector<cplx> out;
  for (const auto& item : j) out.push_back(complex_from_json(item));
  return out;
}

}  // namespace

json sequence_to_json(const Sequence& seq) {
  json params;
  switch (seq.kind()) {
    case SequenceKind::ExplicitList:
      params["alphas"] = complex_list_to_json(seq.list_data());
      break;
    case SequenceKind::Constant:
      params["alpha"] = complex_to_json(seq.list_data()[0]);
      break;
    case SequenceKind::Periodic:
      params["period"] = complex_list_to_json(seq.list_data());
      break;
    case SequenceKind::PeriodicDecay:
      params["period"] = complex_list_to_json(seq.list_data());
      params["decayCoeff"] = seq.decay_coeff();
      break;
    case SequenceKind::RotatingPhase:
      params["amplitude"] = seq.amplitude();
      params["exponent"] = seq.exponent();
      params["phaseScale"] = seq.phase_scale();
      break;
    case SequenceKind::CustomGenerator:
      throw ConfigError("custom-generator sequences cannot be serialized");
  }
  return json{{"kind", sequence_kind_name(seq.kind())},
              {"params", params},
              {"offset", seq.offset()},
              {"capBound", seq.cap_bound()}};
}

Sequence sequence_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const json& params = j.at("params");
  const double cap = j.value("capBound", kDefaultCapBound);
  Sequence seq = [&]() {
    if (kind == "explicit-list") {
      return Sequence::explicit_list(complex_list_from_json(params.at("alphas")), cap);
    }
    if (kind == "constant") {
      return Sequence::constant(complex_from_json(params.at("alpha")), cap);
    }
    if (kind == "p-periodic") {
      return Sequence::periodic(complex_list_from_json(params.at("period")), cap);
    }
    if (kind == "periodic-plus-decaying") {
      return Sequence::periodic_decay(complex_list_from_json(params.at("period")),
                                      params.value("decayCoeff", 1.0), cap);
    }
    if (kind == "rotating-phase") {
      return Sequence::rotating_phase(params.at("amplitude").get<double>(),
                                      params.at("exponent").get<double>(),
                                      params.value("phaseScale", 1.0), cap);
    }
    throw ConfigError("unknown sequence kind '" + kind + "'");
  }();
  return seq.strip(j.value("offset", std::int64_t{0}));
}

json arcset_to_json(const ArcSet& set) {
  json arcs = json::array();
  for (const Arc& a : set.arcs()) arcs.push_back(json::array({a.lo, a.hi}));
  return json{{"arcs", arcs}};
}

ArcSet arcset_from_json(const json& j) {
  std::vector<Arc> arcs;
  for (const auto& item : j.at("arcs")) {
    arcs.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  return ArcSet::from_arcs(std::move(arcs));
}

void write_lprofile_csv(std::ostream& os, const LProfile& profile) {
  os << "theta,L\n";
  for (std::size_t i = 0; i < profile.theta.size(); ++i) {
    os << format_double(profile.theta[i]) << ',' << format_double(profile.value[i]) << '\n';
  }
}

void write_density_csv(std::ostream& os, const DensityProfile& profile) {
  os << "theta,w\n";
  for (std::size_t i = 0; i < profile.theta.size(); ++i) {
    os << format_double(profile.theta[i]) << ',' << format_double(profile.w[i]) << '\n';
  }
}

void write_spectral_sample_csv(std::ostream& os, const SpectralSample& sample) {
  os << "theta,weight\n";
  for (std::size_t i = 0; i < sample.theta.size(); ++i) {
    os << format_double(sample.theta[i]) << ',' << format_double(sample.weight[i]) << '\n';
  }
}

}  // namespace opuc
