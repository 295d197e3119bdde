#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "copytrace/corpus.hpp"
#include "copytrace/error.hpp"
#include "copytrace/report.hpp"
#include "copytrace/rkhash.hpp"
#include "copytrace/similarity.hpp"
#include "copytrace/textnorm.hpp"

namespace py = pybind11;

namespace copytrace::python {
namespace {

ByteSpan bytes_view(const py::bytes& b) {
    char* data = nullptr;
    Py_ssize_t size = 0;
    PyBytes_AsStringAndSize(b.ptr(), &data, &size);
    return {reinterpret_cast<const std::uint8_t*>(data), static_cast<std::size_t>(size)};
}

py::dict record_dict(const SentenceRecord& r) {
    py::dict d;
    d["hash"] = r.hash.value;
    d["doc"] = r.doc.value;
    d["para"] = r.para_idx;
    d["sent"] = r.sent_idx;
    d["raw"] = r.raw;
    d["norm"] = r.normalized;
    return d;
}

py::dict summary_dict(const DocumentSummary& s) {
    py::dict d;
    d["id"] = s.id.value;
    d["name"] = s.name;
    d["sentence_count"] = s.sentence_count;
    d["ingested_at"] = s.ingested_at;
    return d;
}

void define_module(py::module_& m) {
    static py::handle error_type =
        py::exception<Error>(m, "CopytraceError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("code") = std::string(e.code_name());
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<Sentence>(m, "Sentence")
        .def_readonly("raw", &Sentence::raw)
        .def_readonly("normalized", &Sentence::normalized)
        .def_readonly("para_idx", &Sentence::para_idx)
        .def_readonly("sent_idx", &Sentence::sent_idx)
        .def("__repr__", [](const Sentence& s) {
            return "Sentence(" + std::to_string(s.para_idx) + ", " + std::to_string(s.sent_idx) +
                   ", " + py::repr(py::str(s.raw)).cast<std::string>() + ")";
        });

    m.def("normalize", &normalize, py::arg("text"));
    m.def("segment", [](std::string_view text) { return segment(text).paragraphs; },
          py::arg("text"), "Paragraphs as lists of Sentence.");

    py::class_<HashParams>(m, "HashParams")
        .def(py::init<>())
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("base"), py::arg("modulus"))
        .def_property_readonly("base", &HashParams::base)
        .def_property_readonly("modulus", &HashParams::modulus);

    m.def("hash_full",
          [](const py::bytes& data, const HashParams& params) {
              return hash_full(bytes_view(data), params).value;
          },
          py::arg("data"), py::arg("params") = HashParams{});
    m.def("search",
          [](const py::bytes& pattern, const py::bytes& text, const HashParams& params) {
              return search(bytes_view(pattern), bytes_view(text), params);
          },
          py::arg("pattern"), py::arg("text"), py::arg("params") = HashParams{});

    m.def("percentage", [](std::uint64_t k, std::uint64_t n) { return percentage(k, n).str(); },
          py::arg("matched"), py::arg("total"), "One-decimal string, e.g. '14.3'.");
    m.def("classify",
          [](int tenths) { return std::string(band_name(classify(Percentage::from_tenths(tenths)))); },
          py::arg("tenths"), "Band name for a percentage given in tenths (143 for 14.3%).");

    py::class_<Corpus>(m, "Corpus")
        .def(py::init([](std::optional<std::filesystem::path> path) {
                 if (!path) return Corpus::in_memory();
                 return std::make_unique<Corpus>(*path);
             }),
             py::arg("path") = py::none())
        .def("ingest",
             [](Corpus& c, std::string name, std::string_view text) {
                 return c.ingest(std::move(name), text).value;
             },
             py::arg("name"), py::arg("text"))
        .def("remove", [](Corpus& c, std::uint64_t id) { return c.remove_document({id}); },
             py::arg("id"))
        .def("list_documents",
             [](const Corpus& c) {
                 py::list out;
                 for (const auto& s : c.list_documents()) out.append(summary_dict(s));
                 return out;
             })
        .def("lookup_hash",
             [](const Corpus& c, std::uint64_t h) {
                 py::list out;
                 for (const auto& r : c.lookup_hash({h})) out.append(record_dict(r));
                 return out;
             },
             py::arg("hash"))
        .def("export_xml", [](const Corpus& c, std::uint64_t id) { return c.export_xml({id}); },
             py::arg("id"))
        .def("compare_json",
             [](const Corpus& c, std::uint64_t a, std::uint64_t b) {
                 return render_json(compare(*c.snapshot(), {a}, {b}));
             },
             py::arg("a"), py::arg("b"))
        .def("compare_html",
             [](const Corpus& c, std::uint64_t a, std::uint64_t b) {
                 const auto index = c.snapshot();
                 return render_html(compare(*index, {a}, {b}), *index);
             },
             py::arg("a"), py::arg("b"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {  // NOLINT
    m.doc() = "Sentence-fingerprint document similarity";
    define_module(m);
}

}  // namespace copytrace::python
