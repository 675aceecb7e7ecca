#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridtomo/bench.hpp"
#include "gridtomo/bra.hpp"
#include "gridtomo/error.hpp"
#include "gridtomo/image_io.hpp"
#include "gridtomo/oracle.hpp"
#include "gridtomo/phantom.hpp"

namespace py = pybind11;
using namespace gridtomo;

namespace {

using Pairs = std::vector<std::pair<int, int>>;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DirectionSet dirs_of(const Pairs& p) { return DirectionSet::from_pairs(p); }

GridDims grid_of(std::pair<int, int> g) { return GridDims(g.first, g.second); }

Pairs pairs_of(const DirectionSet& s) {
  Pairs out;
  for (const auto& d : s) out.emplace_back(d.a(), d.b());
  return out;
}

// Rows are η, columns ξ: shape (N, M).
Image image_of(const Array& a, bool binary) {
  if (a.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a 2-d array");
  const GridDims g(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::vector<double> v(a.data(), a.data() + a.size());
  return binary ? Image::binary(g, std::move(v)) : Image(g, std::move(v), ImageKind::Real);
}

Array array_of(const Image& img) {
  Array out({img.dims().height, img.dims().width});
  std::copy(img.values().begin(), img.values().end(), out.mutable_data());
  return out;
}

ProjectionVector projection_of(const Array& p) {
  if (p.ndim() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a 1-d projection vector");
  return {std::vector<double>(p.data(), p.data() + p.size())};
}

Array vector_of(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Binary reconstruction from four lattice directions";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("normalize_direction", [](int a, int b) {
    const Direction d = normalize_direction(a, b);
    return std::pair{d.a(), d.b()};
  });
  m.def("construct_set_odd_n", [](int n) { return pairs_of(construct_set_odd_n(n)); });
  m.def("check_binary_uniqueness_json", [](const Pairs& s, std::pair<int, int> g) {
    return report_json(check_binary_uniqueness(dirs_of(s), grid_of(g))).dump();
  });
  m.def("check_sufficient_window", [](const Pairs& s, std::pair<int, int> g) {
    return check_sufficient_window(dirs_of(s), grid_of(g));
  });
  m.def("expand_fs", [](const Pairs& s) { return expand_fs(dirs_of(s)).to_string(); });
  m.def("ghost_dimension", [](const Pairs& s, std::pair<int, int> g) {
    return ghost_dimension(dirs_of(s), grid_of(g));
  });
  m.def("ghost_basis", [](const Pairs& s, std::pair<int, int> g, std::pair<int, int> u) {
    const DirectionSet d = dirs_of(s);
    const GridDims gd = grid_of(g);
    return array_of(build_ghost_gu(build_bad_configuration(d), enlarging_region(d, gd), gd, {u.first, u.second}));
  });
  m.def("bin_counts", [](const Pairs& s, std::pair<int, int> g) {
    const BinLayout layout = build_layout(dirs_of(s), grid_of(g));
    std::vector<int> out;
    for (const auto& b : layout.blocks()) out.push_back(b.count);
    return out;
  });

  m.def("project", [](const Pairs& s, const Array& image) {
    const Image x = image_of(image, false);
    return vector_of(forward_project(build_matrix(dirs_of(s), x.dims()), x).values);
  }, py::arg("dirs"), py::arg("image"));
  m.def("back_project", [](const Pairs& s, std::pair<int, int> g, const Array& p) {
    return array_of(back_project(build_matrix(dirs_of(s), grid_of(g)), projection_of(p)));
  });
  m.def("cgls", [](const Pairs& s, std::pair<int, int> g, const Array& p, int kappa, std::optional<double> tol) {
    return array_of(cgls(build_matrix(dirs_of(s), grid_of(g)), projection_of(p), {kappa, tol, true}).x);
  }, py::arg("dirs"), py::arg("grid"), py::arg("p"), py::arg("kappa"), py::arg("tol") = py::none());

  m.def("reconstruct", [](const Pairs& s, std::pair<int, int> g, const Array& p, int kappa, bool force,
                          bool fast_path, std::optional<double> tol) {
    BraOptions o;
    o.kappa = kappa;
    o.force = force;
    o.fast_path = fast_path;
    o.residual_tol = tol;
    const auto r = bra(dirs_of(s), grid_of(g), projection_of(p), o);
    py::dict out;
    out["binary"] = array_of(r.binary);
    out["xk"] = array_of(r.xk);
    out["corrected"] = array_of(r.corrected);
    out["alpha"] = vector_of(r.weights.alpha);
    out["kappa_used"] = r.kappa_used;
    out["diagnostics_json"] = diagnostics_json(r).dump();
    return out;
  }, py::arg("dirs"), py::arg("grid"), py::arg("p"), py::arg("kappa"), py::arg("force") = false,
     py::arg("fast_path") = true, py::arg("tol") = py::none());

  m.def("enumerate_binary_solutions", [](const Pairs& s, std::pair<int, int> g, const Array& p, std::size_t cap) {
    const auto r = enumerate_binary_solutions(build_matrix(dirs_of(s), grid_of(g)), projection_of(p), cap);
    py::list sols;
    for (const auto& img : r.solutions) sols.append(array_of(img));
    return py::make_tuple(sols, r.truncated);
  }, py::arg("dirs"), py::arg("grid"), py::arg("p"), py::arg("cap") = 100);
  m.def("dense_min_norm", [](const Pairs& s, std::pair<int, int> g, const Array& p) {
    return array_of(dense_min_norm(build_matrix(dirs_of(s), grid_of(g)), projection_of(p)));
  });

  m.def("random_phantom", [](std::pair<int, int> g, double density, std::uint64_t seed) {
    return array_of(generate_phantom(PhantomSpec::random(grid_of(g), density, seed)));
  }, py::arg("grid"), py::arg("density") = 0.5, py::arg("seed") = 0);
  m.def("shape_phantom", [](std::pair<int, int> g, const std::string& shape, std::uint64_t seed) {
    return array_of(generate_phantom(PhantomSpec::shapes(grid_of(g), parse_shape_class(shape), seed)));
  }, py::arg("grid"), py::arg("shape") = "smooth", py::arg("seed") = 0);
  m.def("fixture_phantom", [](const std::string& name) { return array_of(generate_phantom(PhantomSpec::fixture(name))); });

  m.def("bench_csv", [](const Array& truth, const Pairs& s, std::vector<int> schedule) {
    return bench_csv(run_bench(image_of(truth, true), dirs_of(s), std::move(schedule)));
  });

  m.def("load_image", [](const std::string& path) { return array_of(load_image(path)); });
  m.def("save_image", [](const std::string& path, const Array& a, const std::string& fmt) {
    save_image(path, image_of(a, false), parse_image_format(fmt));
  }, py::arg("path"), py::arg("image"), py::arg("format") = "pgm");
}
