#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmod/classifier.hpp"
#include "rmod/errors.hpp"
#include "rmod/eval.hpp"
#include "rmod/rstat.hpp"
#include "rmod/siggen.hpp"

namespace py = pybind11;
using namespace rmod;

namespace {

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw ValidationError("expected a 1-d array of samples");
    return std::vector<double>(a.data(), a.data() + a.shape(0));
}

py::array_t<double> as_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::array<std::vector<double>, 3> samples_by_class(
    const std::map<std::string, std::vector<double>>& per_class) {
    std::array<std::vector<double>, 3> out;
    for (const auto& [name, values] : per_class)
        out[class_ordinal(modulation_from_string(name))] = values;
    return out;
}

py::dict accuracy_dict(const ConfusionMatrix& cm) {
    py::dict d;
    for (ModulationClass cls : kModulationClasses)
        d[to_string(cls)] = class_accuracy(cm, cls);
    d["overall"] = overall_accuracy(cm);
    return d;
}

py::array_t<std::uint64_t> confusion_array(const ConfusionMatrix& cm) {
    py::array_t<std::uint64_t> out({3, 4});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            view(r, c) = cm.at(kModulationClasses[r], static_cast<Outcome>(c));
    return out;
}

} // namespace

PYBIND11_MODULE(rmod, m) {
    m.doc() = "R-value (variance over squared envelope mean) modulation classification";

    py::register_exception<ValidationError>(m, "RmodValidationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "RmodIoError", PyExc_IOError);
    py::register_exception<CalibrationError>(m, "RmodCalibrationError", PyExc_RuntimeError);

    py::enum_<ModulationClass>(m, "ModulationClass")
        .value("AM", ModulationClass::AM)
        .value("DSB", ModulationClass::DSB)
        .value("SSB", ModulationClass::SSB);

    py::enum_<RMethod>(m, "RMethod")
        .value("HILBERT", RMethod::Hilbert)
        .value("STFT", RMethod::Stft);

    py::enum_<WindowFn>(m, "WindowFn")
        .value("RECTANGULAR", WindowFn::Rectangular)
        .value("HANN", WindowFn::Hann);

    py::enum_<Outcome>(m, "Outcome")
        .value("AM", Outcome::AM)
        .value("DSB", Outcome::DSB)
        .value("SSB", Outcome::SSB)
        .value("UNKNOWN", Outcome::Unknown);

    py::enum_<Sideband>(m, "Sideband")
        .value("UPPER", Sideband::Upper)
        .value("LOWER", Sideband::Lower);

    py::class_<GenConfig>(m, "GenConfig")
        .def(py::init<>())
        .def_readwrite("carrier_freq_hz", &GenConfig::carrier_freq_hz)
        .def_readwrite("sample_rate_hz", &GenConfig::sample_rate_hz)
        .def_readwrite("duration_s", &GenConfig::duration_s)
        .def_readwrite("noise_power", &GenConfig::noise_power)
        .def_readwrite("mod_index", &GenConfig::mod_index)
        .def_readwrite("message_freq_lo_hz", &GenConfig::message_freq_lo_hz)
        .def_readwrite("message_freq_hi_hz", &GenConfig::message_freq_hi_hz)
        .def_readwrite("message_amplitude", &GenConfig::message_amplitude)
        .def_readwrite("ssb_sideband", &GenConfig::ssb_sideband)
        .def("sample_count", &GenConfig::sample_count)
        .def("validate", &GenConfig::validate)
        .def("__repr__",
             [](const GenConfig& c) { return "GenConfig(" + c.canonical_string() + ")"; });

    py::class_<StftConfig>(m, "StftConfig")
        .def(py::init<>())
        .def(py::init([](std::size_t window_len, std::size_t hop, WindowFn window_fn) {
                 return StftConfig{window_len, hop, window_fn};
             }),
             py::arg("window_len") = 64, py::arg("hop") = 16,
             py::arg("window_fn") = WindowFn::Hann)
        .def_readwrite("window_len", &StftConfig::window_len)
        .def_readwrite("hop", &StftConfig::hop)
        .def_readwrite("window_fn", &StftConfig::window_fn);

    py::class_<SignalRecord>(m, "SignalRecord")
        .def_readonly("label", &SignalRecord::label)
        .def_readonly("message_freq_hz", &SignalRecord::message_freq_hz)
        .def_readonly("message_phase_rad", &SignalRecord::message_phase_rad)
        .def_readonly("seed", &SignalRecord::seed)
        .def_readonly("config", &SignalRecord::config)
        .def_property_readonly(
            "samples", [](const SignalRecord& r) { return as_array(r.samples); });

    py::class_<DatasetSpec>(m, "DatasetSpec")
        .def(py::init([](std::size_t counts_per_class, std::uint64_t master_seed,
                         const GenConfig& config) {
                 return DatasetSpec{counts_per_class, master_seed, config};
             }),
             py::arg("counts_per_class"), py::arg("master_seed"),
             py::arg("config") = GenConfig{})
        .def_readwrite("counts_per_class", &DatasetSpec::counts_per_class)
        .def_readwrite("master_seed", &DatasetSpec::master_seed)
        .def_readwrite("config", &DatasetSpec::config);

    py::class_<RValue>(m, "RValue")
        .def_readonly("value", &RValue::value)
        .def_readonly("method", &RValue::method)
        .def_readonly("n_points", &RValue::n_points)
        .def("__repr__", [](const RValue& r) {
            return "RValue(" + std::to_string(r.value) + ", " + to_string(r.method) + ")";
        });

    py::class_<ClassInterval>(m, "ClassInterval")
        .def_readonly("cls", &ClassInterval::cls)
        .def_readonly("lo", &ClassInterval::lo)
        .def_readonly("hi", &ClassInterval::hi);

    py::class_<ThresholdProfile>(m, "ThresholdProfile")
        .def_readonly("method", &ThresholdProfile::method)
        .def_readonly("margin", &ThresholdProfile::margin)
        .def_readonly("calibration_count", &ThresholdProfile::calibration_count)
        .def_readonly("gen_config_digest", &ThresholdProfile::gen_config_digest)
        .def_property_readonly("intervals", [](const ThresholdProfile& p) {
            return std::vector<ClassInterval>(p.intervals.begin(), p.intervals.end());
        });

    py::class_<Decision>(m, "Decision")
        .def_readonly("outcome", &Decision::outcome)
        .def_readonly("r", &Decision::r)
        .def_readonly("matched", &Decision::matched)
        .def_readonly("degenerate", &Decision::degenerate);

    // generation
    m.def("generate_message", &generate_message, py::arg("freq_hz"), py::arg("phase_rad"),
          py::arg("amplitude"), py::arg("n"), py::arg("sample_rate_hz"));
    m.def(
        "modulate",
        [](ModulationClass cls, const py::array_t<double>& message, const GenConfig& cfg) {
            return as_array(modulate(cls, as_vector(message), cfg));
        },
        py::arg("cls"), py::arg("message"), py::arg("config"));
    m.def("generate_record", &generate_record, py::arg("label"), py::arg("seed"),
          py::arg("config") = GenConfig{});
    m.def("generate_dataset", &generate_dataset, py::arg("spec"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("write_dataset_file",
          [](const std::string& path, const GenConfig& cfg,
             const std::vector<SignalRecord>& records) {
              write_dataset_file(path, cfg, records);
          });
    m.def("read_dataset_file", [](const std::string& path) {
        Dataset ds = read_dataset_file(path);
        return py::make_tuple(ds.config, ds.records);
    });

    // envelopes and R
    m.def("envelope_hilbert", [](const py::array_t<double>& signal) {
        return as_array(envelope_hilbert(as_vector(signal)).values);
    });
    m.def(
        "envelope_stft",
        [](const py::array_t<double>& signal, const StftConfig& cfg) {
            return as_array(envelope_stft(as_vector(signal), cfg).values);
        },
        py::arg("signal"), py::arg("config") = StftConfig{});
    m.def(
        "r_pipeline",
        [](const py::array_t<double>& signal, RMethod method, const StftConfig& cfg) {
            return r_pipeline(as_vector(signal), method, cfg);
        },
        py::arg("signal"), py::arg("method"), py::arg("stft_config") = StftConfig{});
    m.def("r_of_record", [](const SignalRecord& rec, RMethod method, const StftConfig& cfg) {
        return r_pipeline(rec, method, cfg);
    }, py::arg("record"), py::arg("method"), py::arg("stft_config") = StftConfig{});

    // classification
    m.def(
        "calibrate",
        [](const std::map<std::string, std::vector<double>>& per_class, RMethod method,
           double margin, const std::string& digest) {
            return calibrate(samples_by_class(per_class), method, margin, digest);
        },
        py::arg("r_samples_per_class"), py::arg("method"), py::arg("margin") = 0.0,
        py::arg("gen_config_digest") = "");
    m.def(
        "classify_r",
        [](double value, RMethod method, const ThresholdProfile& profile) {
            return classify_r(RValue{value, method, 0}, profile);
        },
        py::arg("value"), py::arg("method"), py::arg("profile"));
    m.def(
        "classify_samples",
        [](const py::array_t<double>& signal, const ThresholdProfile& profile,
           const StftConfig& cfg) { return classify_samples(as_vector(signal), profile, cfg); },
        py::arg("signal"), py::arg("profile"), py::arg("stft_config") = StftConfig{});
    m.def("save_profile", &save_profile);
    m.def("load_profile", &load_profile);
    m.def("config_digest", &config_digest, py::arg("gen_config"), py::arg("method"),
          py::arg("stft_config") = StftConfig{});

    // experiments
    m.def(
        "run_experiment",
        [](const DatasetSpec& train, const DatasetSpec& test, RMethod method,
           const StftConfig& cfg, double margin, unsigned threads) {
            ExperimentResult res;
            {
                py::gil_scoped_release release;
                res = run_experiment(train, test, method, cfg, margin, threads);
            }
            py::dict out;
            out["method"] = to_string(method);
            out["accuracy_percent"] = accuracy_dict(res.confusion);
            out["confusion"] = confusion_array(res.confusion);
            out["profile"] = *res.profile;
            out["per_signal_mean_s"] = res.timing.per_signal_mean_s;
            out["total_wall_s"] = res.timing.total_wall_s;
            return out;
        },
        py::arg("train_spec"), py::arg("test_spec"), py::arg("method"),
        py::arg("stft_config") = StftConfig{}, py::arg("margin") = 0.0,
        py::arg("threads") = 1);
}
