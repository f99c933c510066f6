#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "combworks/process.hpp"

namespace combworks {

namespace {

constexpr const char* kSchemaVersion = "combworks-process-v1";
constexpr const char* kSpaceOrder = "in-out-interleaved";

// %.17g guarantees exact double round-trips; the writer is hand-rolled so the
// document layout (and therefore the bytes) is stable across runs.
std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

void append_real_array(std::ostringstream& os, const ComplexMatrix& m, bool imag) {
  os << "[";
  bool first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!first) os << ", ";
      first = false;
      os << fmt_real(imag ? m(r, c).imag() : m(r, c).real());
    }
  os << "]";
}

}  // namespace

std::string serialize_process(const ProcessTensor& p, const ProcessMetadata& meta) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"version\": \"" << kSchemaVersion << "\",\n";
  os << "  \"n\": " << p.steps() << ",\n";
  os << "  \"sys_dim\": " << p.sys_dim() << ",\n";
  os << "  \"space_order\": \"" << kSpaceOrder << "\",\n";
  os << "  \"choi_re\": ";
  append_real_array(os, p.choi(), false);
  os << ",\n  \"choi_im\": ";
  append_real_array(os, p.choi(), true);
  os << ",\n  \"metadata\": {\n";
  os << "    \"name\": \"" << escape(meta.name) << "\",\n";
  os << "    \"hamiltonian_diag\": [";
  for (size_t i = 0; i < meta.hamiltonian_diag.size(); ++i) {
    if (i) os << ", ";
    os << fmt_real(meta.hamiltonian_diag[i]);
  }
  os << "],\n";
  os << "    \"temperature\": " << fmt_real(meta.temperature) << "\n";
  os << "  }\n}\n";
  return os.str();
}

ParsedProcess parse_process(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("parse_process: malformed document: ") + e.what());
  }

  const auto require = [&](const char* key) {
    if (!doc.contains(key))
      throw std::runtime_error(std::string("parse_process: missing field '") + key + "'");
  };
  require("version");
  if (doc["version"].get<std::string>() != kSchemaVersion)
    throw std::runtime_error("parse_process: unknown version '" +
                             doc["version"].get<std::string>() + "'");
  require("n");
  require("sys_dim");
  require("space_order");
  require("choi_re");
  require("choi_im");
  if (doc["space_order"].get<std::string>() != kSpaceOrder)
    throw std::runtime_error("parse_process: unsupported space order");

  const int n = doc["n"].get<int>();
  const int d = doc["sys_dim"].get<int>();
  if (n < 1 || d < 1) throw std::runtime_error("parse_process: invalid shape");
  long side = 1;
  for (int i = 0; i < 2 * n; ++i) side *= d;

  const auto& re = doc["choi_re"];
  const auto& im = doc["choi_im"];
  if (!re.is_array() || !im.is_array() ||
      static_cast<long>(re.size()) != side * side || static_cast<long>(im.size()) != side * side)
    throw std::runtime_error("parse_process: choi arrays have wrong length");

  ComplexMatrix choi(side, side);
  for (long r = 0; r < side; ++r)
    for (long c = 0; c < side; ++c) {
      const long k = r * side + c;
      choi(r, c) = Complex(re[k].get<double>(), im[k].get<double>());
    }

  ProcessMetadata meta;
  if (doc.contains("metadata")) {
    const auto& m = doc["metadata"];
    if (m.contains("name")) meta.name = m["name"].get<std::string>();
    if (m.contains("hamiltonian_diag"))
      meta.hamiltonian_diag = m["hamiltonian_diag"].get<std::vector<double>>();
    if (m.contains("temperature")) meta.temperature = m["temperature"].get<double>();
  }

  try {
    return ParsedProcess{ProcessTensor::from_choi(n, d, std::move(choi), true), std::move(meta)};
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("parse_process: ") + e.what());
  }
}

}  // namespace combworks
