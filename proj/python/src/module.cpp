#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "majent/cli.hpp"
#include "majent/densop.hpp"
#include "majent/errors.hpp"
#include "majent/qchan.hpp"
#include "majent/seqmaj.hpp"
#include "majent/xfer.hpp"

namespace py = pybind11;
using namespace majent;

namespace {

py::dict verdict_dict(const MajorizationVerdict& v) {
  py::dict d;
  d["holds"] = v.holds;
  d["sums_equal"] = v.sums_equal;
  if (v.first_violation) {
    d["first_violation"] = py::make_tuple(v.first_violation->k, v.first_violation->lhs, v.first_violation->rhs);
  } else {
    d["first_violation"] = py::none();
  }
  return d;
}

KrausChannel channel_of(std::vector<ComplexMatrix> kraus) { return KrausChannel(std::move(kraus)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Majorization, entropy and Kraus-channel numerics";
  m.attr("__version__") = kVersion;

  // Translators run most-recent-first, so bases are registered before subclasses.
  auto base_exc = py::register_exception<Error>(m, "MajentError", PyExc_ValueError);
  auto domain_exc = py::register_exception<DomainError>(m, "DomainError", base_exc.ptr());
  py::register_exception<FormatError>(m, "FormatError", base_exc.ptr());
  py::register_exception<MajorizationFailed>(m, "MajorizationFailed", domain_exc.ptr());

  m.def("shannon_entropy", [](std::vector<double> p, bool normalized) {
        return shannon_entropy(ProbVector(std::move(p), normalized));
      }, py::arg("p"), py::arg("normalized") = false, "Shannon entropy in bits.");
  m.def("sort_desc", [](std::vector<double> p) { return sort_desc(ProbVector(std::move(p))).values(); }, py::arg("p"));
  m.def("is_majorized", [](std::vector<double> a, std::vector<double> b, double tol) {
        return verdict_dict(is_majorized(ProbVector(std::move(a)), ProbVector(std::move(b)), tol));
      }, py::arg("a"), py::arg("b"), py::arg("tol") = kDefaultMajorizationTol,
      "Tests a ≺ b; returns {'holds', 'sums_equal', 'first_violation': (k, lhs, rhs) | None}.");
  m.def("tail_group", [](std::vector<double> c, std::size_t n) { return tail_group(ProbVector(std::move(c)), n).values(); },
        py::arg("c"), py::arg("n"));
  m.def("random_majorized_pair", [](std::size_t d, std::uint64_t seed) {
        Rng rng(seed);
        auto [a, b] = random_majorized_pair(d, rng);
        return py::make_tuple(a.values(), b.values());
      }, py::arg("d"), py::arg("seed") = 0);

  m.def("find_transfer_chain", [](std::vector<double> a, std::vector<double> b) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        for (const auto& s : find_transfer_chain(ProbVector(std::move(a)), ProbVector(std::move(b))).steps) {
          out.emplace_back(s.i, s.j, s.t);
        }
        return out;
      }, py::arg("a"), py::arg("b"), "T-transform steps (i, j, t) taking sorted b to sorted a.");
  m.def("transfer_matrix", [](std::vector<double> a, std::vector<double> b) {
        return chain_to_doubly_stochastic(find_transfer_chain(ProbVector(std::move(a)), ProbVector(std::move(b)))).matrix();
      }, py::arg("a"), py::arg("b"), "Doubly stochastic Q with Q·b↓ = a↓.");
  m.def("birkhoff_decompose", [](const Eigen::MatrixXd& q, double tol) {
        std::vector<std::pair<double, Permutation>> out;
        for (const auto& t : birkhoff_decompose(q, tol).terms) out.emplace_back(t.weight, t.perm);
        return out;
      }, py::arg("q"), py::arg("tol") = 1e-12, "List of (weight, perm) with perm mapping row -> column.");
  m.def("schur_horn_orthogonal", [](std::vector<double> a, std::vector<double> b) {
        return schur_horn_orthogonal(ProbVector(std::move(a)), ProbVector(std::move(b))).matrix();
      }, py::arg("a"), py::arg("b"));

  m.def("spectrum", [](const ComplexMatrix& rho) { return spectrum(DensityMatrix(rho)).values(); }, py::arg("rho"));
  m.def("von_neumann_entropy", [](const ComplexMatrix& rho) { return von_neumann_entropy(DensityMatrix(rho)); },
        py::arg("rho"), "S(ρ) in bits.");
  m.def("trace_distance", [](const ComplexMatrix& a, const ComplexMatrix& b) {
        return trace_distance(DensityMatrix(a), DensityMatrix(b));
      }, py::arg("rho1"), py::arg("rho2"));
  m.def("random_density", [](std::size_t d, std::uint64_t seed) {
        Rng rng(seed);
        return random_density(d, rng).matrix();
      }, py::arg("d"), py::arg("seed") = 0);

  m.def("apply_channel", [](std::vector<ComplexMatrix> kraus, const ComplexMatrix& rho) {
        return apply(channel_of(std::move(kraus)), DensityMatrix(rho)).matrix();
      }, py::arg("kraus"), py::arg("rho"));
  m.def("uhlmann_channel", [](const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
        return uhlmann_channel(DensityMatrix(rho1), DensityMatrix(rho2)).kraus();
      }, py::arg("rho1"), py::arg("rho2"), "Kraus operators of a bistochastic channel mapping rho2 to rho1.");
  m.def("mixed_unitary_uhlmann", [](const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
        MixedUnitary mu = mixed_unitary_uhlmann(DensityMatrix(rho1), DensityMatrix(rho2));
        return py::make_tuple(mu.weights, mu.unitaries);
      }, py::arg("rho1"), py::arg("rho2"));
  m.def("pinch_convergence", [](const ComplexMatrix& rho2, std::optional<ComplexMatrix> basis) {
        const auto n = rho2.rows();
        std::vector<std::tuple<std::size_t, double, double>> out;
        for (const auto& r : pinch_convergence_experiment(DensityMatrix(rho2), basis.value_or(ComplexMatrix::Identity(n, n)))) {
          out.emplace_back(r.n, r.trace_distance, r.bound);
        }
        return out;
      }, py::arg("rho2"), py::arg("basis") = py::none());
  m.def("detect_isometry", [](std::vector<ComplexMatrix> kraus, double tol) {
        const IsometryReport r = detect_isometry(channel_of(std::move(kraus)), tol);
        py::dict d;
        d["is_isometric_conjugation"] = r.is_isometric_conjugation;
        d["isometry"] = r.isometry ? py::cast(*r.isometry) : py::none();
        d["gram"] = r.gram ? py::cast(*r.gram) : py::none();
        d["failure_witness"] = r.failure_witness
                                   ? py::object(py::make_tuple(r.failure_witness->i, r.failure_witness->j, r.failure_witness->deviation))
                                   : py::none();
        return d;
      }, py::arg("kraus"), py::arg("tol") = kDefaultIsometryTol);
  m.def("entropy_probe", [](std::vector<ComplexMatrix> kraus, std::size_t trials, std::uint64_t seed) {
        const KrausChannel phi = channel_of(std::move(kraus));
        Rng rng(seed);
        const ProbeResult r = entropy_probe(phi, trials, phi.d_in(), rng);
        return py::make_tuple(r.max_deviation, r.worst_seed);
      }, py::arg("kraus"), py::arg("trials") = 1000, py::arg("seed") = 0);

  m.def("run_cli", [](std::vector<std::string> args) {
        const cli::RunResult r = cli::dispatch(cli::parse_args(std::move(args)));
        return py::make_tuple(r.exit_code, r.report, r.error);
      }, py::arg("args"), "Runs a CLI subcommand in-process; returns (exit_code, report, error).");
}
