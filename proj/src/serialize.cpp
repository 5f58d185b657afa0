#include "htridiag/serialize.hpp"

#include <cstdio>

namespace htridiag {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InvalidParameterError("complex values must be [re, im] arrays");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

namespace {

json seq_to_json(const ComplexSeq& seq, std::size_t n_terms) {
  json out = json::array();
  for (std::size_t n = 0; n < n_terms; ++n) out.push_back(complex_to_json(seq(n)));
  return out;
}

ComplexSeq seq_from_json(const json& j) {
  std::vector<cplx> values;
  values.reserve(j.size());
  for (const auto& item : j) values.push_back(complex_from_json(item));
  return ComplexSeq::from_values(std::move(values));
}

}  // namespace

json band_to_json(const BandSpec& spec, std::size_t n_terms) {
  json out;
  out["h"] = spec.h;
  out["a"] = seq_to_json(spec.a, n_terms);
  out["b"] = seq_to_json(spec.b, n_terms);
  out["bp"] = seq_to_json(spec.bp, n_terms);
  out["n_terms"] = n_terms;
  return out;
}

BandSpec band_from_json(const json& j) {
  return BandSpec(j.at("h").get<std::size_t>(), seq_from_json(j.at("a")),
                  seq_from_json(j.at("b")), seq_from_json(j.at("bp")));
}

json factorization_to_json(const FactorizationSpec& f, std::size_t n_terms) {
  json out;
  out["h"] = f.h;
  out["c"] = seq_to_json(f.c, n_terms);
  out["cp"] = seq_to_json(f.cp, n_terms);
  out["d"] = seq_to_json(f.d, n_terms);
  out["dp"] = seq_to_json(f.dp, n_terms);
  out["n_terms"] = n_terms;
  return out;
}

FactorizationSpec factorization_from_json(const json& j) {
  return FactorizationSpec(j.at("h").get<std::size_t>(), seq_from_json(j.at("c")),
                           seq_from_json(j.at("cp")), seq_from_json(j.at("d")),
                           seq_from_json(j.at("dp")));
}

json packet_to_json(const EigenPacket& packet) {
  json out;
  out["E"] = complex_to_json(packet.energy);
  out["side"] = to_string(packet.side);
  out["c0"] = complex_to_json(packet.c0);
  json p = json::array();
  for (const cplx& v : packet.p) p.push_back(complex_to_json(v));
  out["p"] = std::move(p);
  out["N"] = packet.size();
  return out;
}

EigenPacket packet_from_json(const json& j) {
  EigenPacket packet;
  packet.energy = complex_from_json(j.at("E"));
  packet.side = side_from_string(j.at("side").get<std::string>());
  packet.c0 = complex_from_json(j.at("c0"));
  for (const auto& item : j.at("p")) packet.p.push_back(complex_from_json(item));
  const std::size_t n = j.at("N").get<std::size_t>();
  if (n != packet.p.size())
    throw InvalidParameterError("packet_from_json: N does not match the coefficient count");
  return packet;
}

json model_to_json(const models::ModelDescriptor& model, std::size_t n_terms) {
  json out;
  out["name"] = model.name;
  json params;
  for (const auto& [key, value] : model.params) params[key] = complex_to_json(value);
  out["params"] = std::move(params);
  out["h"] = model.band.h;
  out["band"] = band_to_json(model.band, n_terms);
  out["factors"] = factorization_to_json(model.factors, n_terms);
  out["susy"] = band_to_json(model.susy, n_terms);
  if (model.spectrum) {
    json spectrum = json::array();
    for (std::size_t n = 0; n < n_terms; ++n)
      spectrum.push_back(complex_to_json((*model.spectrum)(n)));
    out["spectrum"] = std::move(spectrum);
  } else {
    out["spectrum"] = nullptr;
  }
  out["level_stride"] = model.level_stride;
  out["reference_available"] = model.reference_levels > 0;
  out["reference_levels"] = model.reference_levels;
  out["reference_c0"] =
      model.reference_c0 ? complex_to_json(*model.reference_c0) : json(nullptr);
  out["note"] = model.note;
  return out;
}

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string spectrum_to_csv(const std::vector<cplx>& eigenvalues) {
  std::string out = "re,im\n";
  for (const cplx& z : eigenvalues)
    out += format_real(z.real()) + "," + format_real(z.imag()) + "\n";
  return out;
}

std::string band_to_csv(const BandSpec& spec, std::size_t n_terms) {
  std::string out = "n,a_re,a_im,b_re,b_im,bp_re,bp_im\n";
  for (std::size_t n = 0; n < n_terms; ++n) {
    const cplx a = spec.a(n);
    const cplx b = spec.b(n);
    const cplx bp = spec.bp(n);
    out += std::to_string(n) + "," + format_real(a.real()) + "," + format_real(a.imag()) +
           "," + format_real(b.real()) + "," + format_real(b.imag()) + "," +
           format_real(bp.real()) + "," + format_real(bp.imag()) + "\n";
  }
  return out;
}

std::string packets_to_csv(const std::vector<EigenPacket>& packets) {
  std::string out = "packet,side,k,re,im\n";
  for (std::size_t idx = 0; idx < packets.size(); ++idx) {
    const std::vector<cplx> coeffs = packets[idx].coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      out += std::to_string(idx) + "," + to_string(packets[idx].side) + "," +
             std::to_string(k) + "," + format_real(coeffs[k].real()) + "," +
             format_real(coeffs[k].imag()) + "\n";
  }
  return out;
}

}  // namespace htridiag
