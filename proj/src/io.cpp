#include "majent/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "majent/errors.hpp"

namespace majent::io {

namespace {

[[noreturn]] void schema_fail(std::string_view where, std::string_view field, std::string_view problem) {
  std::ostringstream os;
  os << where << ": field '" << field << "': " << problem;
  throw SchemaError(os.str());
}

const Json& require_field(const Json& j, std::string_view where, const char* field) {
  if (!j.is_object()) schema_fail(where, "<root>", "expected a JSON object");
  const auto it = j.find(field);
  if (it == j.end()) schema_fail(where, field, "missing");
  return *it;
}

double require_number(const Json& j, std::string_view where, const std::string& field) {
  if (!j.is_number()) schema_fail(where, field, "expected a number");
  return j.get<double>();
}

std::size_t require_size(const Json& j, std::string_view where, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    schema_fail(where, field, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

// Re-raises library validation failures as schema errors naming the field.
template <typename F>
auto validated(std::string_view where, std::string_view field, F&& build) {
  try {
    return build();
  } catch (const NotHermitian& e) {
    std::ostringstream os;
    os << "matrix is not Hermitian, worst entry pair (" << e.row() << "," << e.col() << ") deviates by "
       << e.deviation();
    schema_fail(where, field, os.str());
  } catch (const DomainError& e) {
    schema_fail(where, field, e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    std::ostringstream os;
    os << path.string() << ": malformed JSON at byte " << e.byte << ": " << e.what();
    throw SchemaError(os.str());
  }
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

void save_json(const Json& value, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << dump(value);
  if (!out) throw IoError(path.string() + ": write failed");
}

Json to_json(const ProbVector& p) { return Json{{"entries", p.values()}, {"normalized", p.normalized()}}; }

ProbVector prob_vector_from_json(const Json& j, std::string_view where) {
  const Json& entries = require_field(j, where, "entries");
  if (!entries.is_array() || entries.empty()) schema_fail(where, "entries", "expected a non-empty array");
  std::vector<double> v;
  v.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    v.push_back(require_number(entries[i], where, "entries[" + std::to_string(i) + "]"));
  }
  bool normalized = false;
  if (const auto it = j.find("normalized"); it != j.end()) {
    if (!it->is_boolean()) schema_fail(where, "normalized", "expected a boolean");
    normalized = it->get<bool>();
  }
  return validated(where, "entries", [&] { return ProbVector(std::move(v), normalized); });
}

Json real_matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"d", m.rows()}, {"rows", std::move(rows)}};
}

Eigen::MatrixXd real_matrix_from_json(const Json& j, std::string_view where) {
  const std::size_t d = require_size(require_field(j, where, "d"), where, "d");
  const Json& rows = require_field(j, where, "rows");
  if (!rows.is_array() || rows.size() != d) schema_fail(where, "rows", "expected " + std::to_string(d) + " rows");
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    const std::string rf = "rows[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != d) schema_fail(where, rf, "expected " + std::to_string(d) + " entries");
    for (std::size_t k = 0; k < d; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          require_number(rows[i][k], where, rf + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

DoublyStochasticMatrix doubly_stochastic_from_json(const Json& j, std::string_view where) {
  Eigen::MatrixXd m = real_matrix_from_json(j, where);
  return validated(where, "rows", [&] { return DoublyStochasticMatrix(std::move(m)); });
}

OrthogonalMatrix orthogonal_from_json(const Json& j, std::string_view where) {
  Eigen::MatrixXd m = real_matrix_from_json(j, where);
  return validated(where, "rows", [&] { return OrthogonalMatrix(std::move(m)); });
}

Json to_json(const BirkhoffDecomposition& b) {
  Json terms = Json::array();
  for (const auto& t : b.terms) terms.push_back(Json{{"weight", t.weight}, {"perm", t.perm}});
  return Json{{"terms", std::move(terms)}};
}

BirkhoffDecomposition birkhoff_from_json(const Json& j, std::string_view where) {
  const Json& terms = require_field(j, where, "terms");
  if (!terms.is_array()) schema_fail(where, "terms", "expected an array");
  BirkhoffDecomposition out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tf = "terms[" + std::to_string(i) + "]";
    const Json& term = terms[i];
    if (!term.is_object() || !term.contains("weight") || !term.contains("perm")) {
      schema_fail(where, tf, "expected {\"weight\":w,\"perm\":[...]}");
    }
    BirkhoffTerm bt{require_number(term["weight"], where, tf + ".weight"), {}};
    const Json& perm = term["perm"];
    if (!perm.is_array()) schema_fail(where, tf + ".perm", "expected an array");
    for (std::size_t k = 0; k < perm.size(); ++k) {
      bt.perm.push_back(require_size(perm[k], where, tf + ".perm[" + std::to_string(k) + "]"));
    }
    std::vector<char> seen(bt.perm.size(), 0);
    for (std::size_t c : bt.perm) {
      if (c >= bt.perm.size() || seen[c]) schema_fail(where, tf + ".perm", "not a permutation");
      seen[c] = 1;
    }
    if (!out.terms.empty() && bt.perm.size() != out.terms.front().perm.size()) {
      schema_fail(where, tf + ".perm", "length differs from earlier terms");
    }
    out.terms.push_back(std::move(bt));
  }
  return out;
}

Json to_json(const TransferChain& c) {
  Json steps = Json::array();
  for (const auto& s : c.steps) steps.push_back(Json{{"i", s.i}, {"j", s.j}, {"t", s.t}});
  return Json{{"d", c.dimension}, {"steps", std::move(steps)}};
}

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return Json{{"d_rows", m.rows()}, {"d_cols", m.cols()}, {"rows", std::move(rows)}};
}

ComplexMatrix complex_matrix_from_json(const Json& j, std::string_view where) {
  const std::size_t r = require_size(require_field(j, where, "d_rows"), where, "d_rows");
  const std::size_t c = require_size(require_field(j, where, "d_cols"), where, "d_cols");
  const Json& rows = require_field(j, where, "rows");
  if (!rows.is_array() || rows.size() != r) schema_fail(where, "rows", "expected " + std::to_string(r) + " rows");
  ComplexMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (std::size_t i = 0; i < r; ++i) {
    const std::string rf = "rows[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != c) schema_fail(where, rf, "expected " + std::to_string(c) + " entries");
    for (std::size_t k = 0; k < c; ++k) {
      const std::string ef = rf + "[" + std::to_string(k) + "]";
      const Json& e = rows[i][k];
      if (!e.is_array() || e.size() != 2) schema_fail(where, ef, "expected [re,im]");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          Complex(require_number(e[0], where, ef + "[0]"), require_number(e[1], where, ef + "[1]"));
    }
  }
  return m;
}

Json to_json(const DensityMatrix& rho) {
  Json j = to_json(rho.matrix());
  j["kind"] = "density";
  return j;
}

DensityMatrix density_from_json(const Json& j, std::string_view where) {
  if (const auto it = j.find("kind"); it != j.end() && *it != "density") {
    schema_fail(where, "kind", "expected \"density\"");
  }
  const ComplexMatrix m = complex_matrix_from_json(j, where);
  return validated(where, "rows", [&] { return DensityMatrix(m); });
}

Json to_json(const KrausChannel& phi) {
  Json kraus = Json::array();
  for (const auto& a : phi.kraus()) kraus.push_back(to_json(a));
  return Json{{"d_in", phi.d_in()},
              {"d_out", phi.d_out()},
              {"kraus", std::move(kraus)},
              {"flags", Json{{"trace_preserving", phi.flags().trace_preserving}, {"unital", phi.flags().unital}}}};
}

KrausChannel channel_from_json(const Json& j, std::string_view where) {
  const std::size_t din = require_size(require_field(j, where, "d_in"), where, "d_in");
  const std::size_t dout = require_size(require_field(j, where, "d_out"), where, "d_out");
  const Json& kraus = require_field(j, where, "kraus");
  if (!kraus.is_array() || kraus.empty()) schema_fail(where, "kraus", "expected a non-empty array");
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    const std::string kf = "kraus[" + std::to_string(i) + "]";
    ComplexMatrix a = complex_matrix_from_json(kraus[i], std::string(where) + ": " + kf);
    if (static_cast<std::size_t>(a.rows()) != dout || static_cast<std::size_t>(a.cols()) != din) {
      schema_fail(where, kf, "shape does not match d_out x d_in");
    }
    ops.push_back(std::move(a));
  }
  ChannelFlags flags;
  bool have_flags = false;
  if (const auto it = j.find("flags"); it != j.end()) {
    if (!it->is_object()) schema_fail(where, "flags", "expected an object");
    for (const char* name : {"trace_preserving", "unital"}) {
      if (const auto f = it->find(name); f != it->end()) {
        if (!f->is_boolean()) schema_fail(where, std::string("flags.") + name, "expected a boolean");
        (std::string_view(name) == "unital" ? flags.unital : flags.trace_preserving) = f->get<bool>();
        have_flags = true;
      }
    }
  }
  if (!have_flags) return validated(where, "kraus", [&] { return KrausChannel(std::move(ops)); });
  return validated(where, "flags", [&] { return KrausChannel(std::move(ops), flags); });
}

Json to_json(const MajorizationVerdict& v) {
  Json j{{"holds", v.holds}, {"sums_equal", v.sums_equal}};
  if (v.first_violation) {
    j["first_violation"] = Json{{"k", v.first_violation->k}, {"lhs", v.first_violation->lhs}, {"rhs", v.first_violation->rhs}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

Json to_json(const IsometryReport& r) {
  Json j{{"is_isometric_conjugation", r.is_isometric_conjugation}};
  j["isometry"] = r.isometry ? to_json(*r.isometry) : Json(nullptr);
  j["gram"] = r.gram ? to_json(*r.gram) : Json(nullptr);
  j["failure_witness"] = r.failure_witness
                             ? Json{{"i", r.failure_witness->i}, {"j", r.failure_witness->j}, {"deviation", r.failure_witness->deviation}}
                             : Json(nullptr);
  j["conjugation_residual"] = r.conjugation_residual ? Json(*r.conjugation_residual) : Json(nullptr);
  return j;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "n,trace_distance,bound\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + format_double(r.trace_distance) + "," + format_double(r.bound) + "\n";
  }
  return out;
}

}  // namespace majent::io
