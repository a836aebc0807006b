#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "regsynth/detect.hpp"
#include "regsynth/dsl.hpp"
#include "regsynth/error.hpp"
#include "regsynth/image_io.hpp"
#include "regsynth/manip.hpp"
#include "regsynth/parallel.hpp"
#include "regsynth/synth.hpp"

namespace py = pybind11;
using namespace regsynth;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using PointArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// H x W x 3 uint8 (H x W gray is widened). `holes`, when given, is H x W
// and nonzero where a pixel is unknown.
RasterImage to_image(const ImageArray& a, const std::optional<ImageArray>& holes = std::nullopt) {
  if (a.ndim() != 3 && a.ndim() != 2) throw py::value_error("image must be H x W x 3 or H x W");
  if (a.ndim() == 3 && a.shape(2) != 3) throw py::value_error("image must have 3 channels");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  RasterImage img(w, h);
  const std::uint8_t* src = a.data();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t o = static_cast<std::size_t>(y) * w + x;
      if (a.ndim() == 3) {
        img.set(x, y, {src[o * 3], src[o * 3 + 1], src[o * 3 + 2]});
      } else {
        img.set(x, y, {src[o], src[o], src[o]});
      }
    }
  }
  if (holes) {
    if (holes->ndim() != 2 || holes->shape(0) != h || holes->shape(1) != w) {
      throw py::value_error("mask must be H x W like the image");
    }
    const std::uint8_t* m = holes->data();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (m[static_cast<std::size_t>(y) * w + x]) img.erase(x, y);
      }
    }
  }
  return img;
}

ImageArray to_array(const RasterImage& img) {
  ImageArray out({img.height(), img.width(), 3});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

std::vector<Point2> to_points(const PointArray& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("points must be an N x 2 array");
  std::vector<Point2> pts;
  const double* d = a.data();
  for (py::ssize_t k = 0; k < a.shape(0); ++k) pts.push_back({d[2 * k], d[2 * k + 1]});
  return pts;
}

PointArray to_array(const std::vector<Point2>& pts) {
  PointArray out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  double* d = out.mutable_data();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    d[2 * k] = pts[k].x;
    d[2 * k + 1] = pts[k].y;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regularity program synthesis and program-guided image manipulation";

  // Exception hierarchy: RegsynthError carries .code and .detail.
  static py::handle base = PyErr_NewException("regsynth._core.RegsynthError", PyExc_Exception, nullptr);
  static py::handle domain = PyErr_NewException("regsynth._core.DomainError", base.ptr(), nullptr);
  static py::handle io = PyErr_NewException("regsynth._core.IoError", base.ptr(), nullptr);
  static py::handle schema = PyErr_NewException("regsynth._core.SchemaError", base.ptr(), nullptr);
  static py::handle syntax = PyErr_NewException("regsynth._core.SyntaxError", base.ptr(), nullptr);
  static py::handle grammar = PyErr_NewException("regsynth._core.GrammarError", base.ptr(), nullptr);
  m.attr("RegsynthError") = base;
  m.attr("DomainError") = domain;
  m.attr("IoError") = io;
  m.attr("SchemaError") = schema;
  m.attr("SyntaxError") = syntax;
  m.attr("GrammarError") = grammar;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::handle cls = domain;
      switch (e.kind()) {
        case ErrorKind::Domain: cls = domain; break;
        case ErrorKind::Io: cls = io; break;
        case ErrorKind::Schema: cls = schema; break;
        case ErrorKind::Syntax: cls = syntax; break;
        case ErrorKind::Grammar: cls = grammar; break;
      }
      py::object exc = py::reinterpret_borrow<py::object>(cls)(e.what());
      exc.attr("code") = e.code();
      exc.attr("detail") = py::module_::import("json").attr("loads")(e.detail().dump());
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  py::class_<DrawCommand>(m, "Draw")
      .def_property_readonly("x", [](const DrawCommand& d) { return d.position.x; })
      .def_property_readonly("y", [](const DrawCommand& d) { return d.position.y; })
      .def_readonly("attribute", &DrawCommand::attribute)
      .def_property_readonly("i", [](const DrawCommand& d) { return d.index.i; })
      .def_property_readonly("j", [](const DrawCommand& d) { return d.index.j; })
      .def("__repr__", [](const DrawCommand& d) {
        return "Draw(x=" + std::to_string(d.position.x) + ", y=" + std::to_string(d.position.y) +
               ", attribute=" + std::to_string(d.attribute) + ")";
      });

  py::class_<RegularityProgram>(m, "Program")
      .def_static("parse", [](const std::string& text) { return parse_program(text); }, py::arg("text"))
      .def_static("from_json", [](const std::string& text) { return program_from_json(nlohmann::json::parse(text)); },
                  py::arg("text"))
      .def("to_json", [](const RegularityProgram& p) { return to_json(p).dump(); })
      .def_property_readonly("outer", [](const RegularityProgram& p) { return std::make_pair(p.outer.lo, p.outer.hi); })
      .def_property_readonly("inner", [](const RegularityProgram& p) { return std::make_pair(p.inner.lo, p.inner.hi); })
      .def_property_readonly("conditions", [](const RegularityProgram& p) {
        std::vector<std::tuple<int, int, int>> out;
        for (const LinearExpr& c : p.conditions) out.emplace_back(c.coef_i, c.coef_j, c.constant);
        return out;
      })
      .def_property_readonly("attribute", [](const RegularityProgram& p) { return print_attribute(p.attribute); })
      .def("execute", [](const RegularityProgram& p, int width, int height) { return execute(p, {width, height}); },
           py::arg("width"), py::arg("height"))
      .def("__str__", [](const RegularityProgram& p) { return print_program(p); })
      .def("__repr__", [](const RegularityProgram& p) { return "Program.parse('''" + print_program(p) + "''')"; })
      .def(py::self == py::self);

  m.def("detect", [](const ImageArray& image) {
    const RasterImage img = to_image(image);
    std::vector<Point2> pts;
    {
      py::gil_scoped_release release;
      pts = detect_centroids(img).points();
    }
    return to_array(pts);
  }, py::arg("image"), "Centroids of repeated objects as an N x 2 array of (x, y).");

  m.def(
      "synthesize",
      [](const PointArray& points, int width, int height, const std::optional<ImageArray>& image,
         double lambda, double mu, int spacing_min, int spacing_max, bool attributes) {
        SynthConfig cfg;
        cfg.lambda = lambda;
        cfg.mu = mu;
        cfg.spacing_min = spacing_min;
        cfg.spacing_max = spacing_max;
        cfg.attributes = attributes;
        const CentroidSet c(to_points(points), {width, height});
        std::optional<RasterImage> img;
        if (image) img = to_image(*image);
        py::gil_scoped_release release;
        return synthesize(c, img ? &*img : nullptr, cfg).program;
      },
      py::arg("points"), py::arg("width"), py::arg("height"), py::arg("image") = py::none(),
      py::arg("lambda_") = 5.0, py::arg("mu") = 10.0, py::arg("spacing_min") = 4, py::arg("spacing_max") = 64,
      py::arg("attributes") = true);

  m.def(
      "inpaint",
      [](const ImageArray& image, const ImageArray& mask, const RegularityProgram& program, double temperature) {
        const RasterImage img = to_image(image, mask);
        CompositeConfig cfg;
        cfg.temperature = temperature;
        RasterImage out;
        {
          py::gil_scoped_release release;
          out = inpaint(img, program, cfg);
        }
        return to_array(out);
      },
      py::arg("image"), py::arg("mask"), py::arg("program"), py::arg("temperature") = 0.05,
      "Fills the pixels where `mask` is nonzero.");

  m.def(
      "extrapolate",
      [](const ImageArray& image, const RegularityProgram& program, int left, int right, int top, int bottom,
         int relax) {
        const RasterImage img = to_image(image);
        ExtrapolationResult r;
        {
          py::gil_scoped_release release;
          r = extrapolate_program(img, program, {left, right, top, bottom, relax});
        }
        return std::make_pair(to_array(r.image), r.program);
      },
      py::arg("image"), py::arg("program"), py::arg("left") = 0, py::arg("right") = 0, py::arg("top") = 0,
      py::arg("bottom") = 0, py::arg("relax") = 0, "Returns the enlarged image and the relaxed program.");

  m.def(
      "edit",
      [](const ImageArray& image, const RegularityProgram& program, const PointArray& centroids, double gain) {
        const RasterImage img = to_image(image);
        const CentroidSet c(to_points(centroids), img.bounds());
        EditResult r;
        {
          py::gil_scoped_release release;
          r = edit_regularity(img, program, c, gain);
        }
        std::vector<std::optional<std::pair<double, double>>> moved;
        for (const auto& p : r.positions) {
          moved.push_back(p ? std::optional(std::make_pair(p->x, p->y)) : std::nullopt);
        }
        return std::make_pair(to_array(r.image), moved);
      },
      py::arg("image"), py::arg("program"), py::arg("centroids"), py::arg("gain") = 2.0,
      "Returns the edited image and the post-edit position of each centroid (None when unmatched).");

  m.def("read_image", [](const std::filesystem::path& path) { return to_array(read_image(path)); }, py::arg("path"));
  m.def("write_image", [](const ImageArray& image, const std::filesystem::path& path) { write_image(to_image(image), path); },
        py::arg("image"), py::arg("path"));
  m.def("set_threads", [](std::size_t n) { set_worker_count(n); }, py::arg("n"),
        "Caps worker threads; 0 restores the default.");
}
