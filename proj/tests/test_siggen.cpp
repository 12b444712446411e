#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rmod/dsp.hpp"
#include "rmod/errors.hpp"
#include "rmod/rng.hpp"
#include "rmod/rstat.hpp"
#include "rmod/siggen.hpp"

using namespace rmod;

TEST_CASE("generate_message evaluates the cosine directly") {
    auto x = generate_message(250.0, 0.0, 1.0, 4, 10000.0);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(std::cos(0.05 * std::numbers::pi)));
    CHECK(x[2] == doctest::Approx(std::cos(0.10 * std::numbers::pi)));
    CHECK(x[3] == doctest::Approx(std::cos(0.15 * std::numbers::pi)));
}

TEST_CASE("generate_message quarter-period phase shift") {
    auto x = generate_message(2500.0, std::numbers::pi / 2.0, 1.0, 2, 10000.0);
    CHECK(std::abs(x[0]) < 1e-12);
    CHECK(x[1] == doctest::Approx(-1.0));
}

TEST_CASE("generate_message mean square of a 2-amplitude tone over full cycles") {
    // brute-force oracle: mean of 4*cos^2 over exactly 5 periods is 2 on the grid
    auto x = generate_message(250.0, 0.0, 2.0, 200, 10000.0);
    double ms = 0.0;
    for (double v : x) ms += v * v;
    ms /= static_cast<double>(x.size());
    CHECK(ms == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("generate_message rejects out-of-band frequencies") {
    CHECK_THROWS_AS(generate_message(0.0, 0.0, 1.0, 8, 10000.0), ValidationError);
    CHECK_THROWS_AS(generate_message(5000.0, 0.0, 1.0, 8, 10000.0), ValidationError);
    CHECK_THROWS_AS(generate_message(6000.0, 0.0, 1.0, 8, 10000.0), ValidationError);
}

TEST_CASE("AM with a zero message is a pure carrier") {
    GenConfig cfg;
    std::vector<double> zero(cfg.sample_count(), 0.0);
    auto s = modulate(ModulationClass::AM, zero, cfg);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double carrier =
            std::cos(2.0 * std::numbers::pi * cfg.carrier_freq_hz * k / cfg.sample_rate_hz);
        CHECK(s[k] == doctest::Approx(carrier).epsilon(1e-12));
    }
}

TEST_CASE("modulate rejects a message of the wrong length") {
    GenConfig cfg;
    std::vector<double> msg(cfg.sample_count() - 1, 0.0);
    CHECK_THROWS_AS(modulate(ModulationClass::DSB, msg, cfg), ValidationError);
}

TEST_CASE("noise-free DSB envelope equals |message| on an integer-cycle grid") {
    GenConfig cfg;
    cfg.noise_power = 0.0;
    auto msg = generate_message(250.0, 0.7, 1.0, cfg.sample_count(), cfg.sample_rate_hz);
    auto dsb = modulate(ModulationClass::DSB, msg, cfg);
    auto env = envelope_hilbert(dsb);
    for (std::size_t k = 0; k < env.values.size(); ++k)
        CHECK(std::abs(env.values[k] - std::abs(msg[k])) < 1e-9);
}

TEST_CASE("noise-free SSB tone is a single tone at carrier + message frequency") {
    GenConfig cfg;
    cfg.noise_power = 0.0;
    const std::size_t n = cfg.sample_count();
    auto msg = generate_message(250.0, 0.3, 1.0, n, cfg.sample_rate_hz);
    auto ssb = modulate(ModulationClass::SSB, msg, cfg);

    // constant envelope equal to the message amplitude
    auto env = envelope_hilbert(ssb);
    for (double v : env.values) CHECK(std::abs(v - 1.0) < 1e-9);

    // spectral line at f_c + f_m for the upper sideband
    std::vector<cdouble> buf(ssb.begin(), ssb.end());
    auto X = dft(buf);
    const std::size_t expect_bin = 25; // (1000 + 250) * 200 / 10000
    for (std::size_t f = 1; f < n / 2; ++f) {
        if (f == expect_bin)
            CHECK(std::abs(X[f]) == doctest::Approx(100.0).epsilon(1e-9)); // n/2 for a cosine
        else
            CHECK(std::abs(X[f]) < 1e-9);
    }

    GenConfig lower = cfg;
    lower.ssb_sideband = Sideband::Lower;
    auto lsb = modulate(ModulationClass::SSB, msg, lower);
    std::vector<cdouble> buf2(lsb.begin(), lsb.end());
    auto X2 = dft(buf2);
    CHECK(std::abs(X2[15]) == doctest::Approx(100.0).epsilon(1e-9)); // 750 Hz
    CHECK(std::abs(X2[25]) < 1e-9);
}

TEST_CASE("add_awgn with zero power returns the signal unchanged") {
    SplitMix64 rng(5);
    std::vector<double> x{1.0, -2.0, 3.5};
    auto y = add_awgn(x, 0.0, rng);
    CHECK(y == x);
}

TEST_CASE("add_awgn sample variance concentrates at the requested power") {
    SplitMix64 rng(1234);
    std::vector<double> zero(1'000'000, 0.0);
    auto y = add_awgn(zero, 0.01, rng);
    const double var = variance(y);
    CHECK(var > 0.0097);
    CHECK(var < 0.0103);
}

TEST_CASE("add_awgn is deterministic for a fixed seed") {
    std::vector<double> zero(1000, 0.0);
    SplitMix64 a(77), b(77);
    auto ya = add_awgn(zero, 0.01, a);
    auto yb = add_awgn(zero, 0.01, b);
    CHECK(ya == yb);
}

TEST_CASE("generate_dataset is a pure function of its spec") {
    DatasetSpec spec{1, 42, {}};
    auto d1 = generate_dataset(spec);
    auto d2 = generate_dataset(spec);
    REQUIRE(d1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(d1[i].label == d2[i].label);
        CHECK(d1[i].seed == d2[i].seed);
        CHECK(d1[i].samples == d2[i].samples); // bit-identical
    }
}

TEST_CASE("generate_dataset is identical across thread counts") {
    DatasetSpec spec{40, 9, {}};
    auto serial = generate_dataset(spec, 1);
    auto parallel = generate_dataset(spec, 7);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(serial[i].samples == parallel[i].samples);
}

TEST_CASE("generate_dataset is class-major and label balanced") {
    DatasetSpec spec{100, 3, {}};
    auto records = generate_dataset(spec, 4);
    REQUIRE(records.size() == 300);
    std::array<std::size_t, 3> counts{};
    for (std::size_t i = 0; i < records.size(); ++i) {
        counts[class_ordinal(records[i].label)]++;
        CHECK(records[i].label == kModulationClasses[i / 100]);
    }
    for (std::size_t c : counts) CHECK(c == 100);
}

TEST_CASE("records regenerate bit-identically from (label, seed, config)") {
    DatasetSpec spec{5, 31337, {}};
    auto records = generate_dataset(spec);
    for (const auto& rec : records) {
        auto again = generate_record(rec.label, rec.seed, rec.config);
        CHECK(again.samples == rec.samples);
        CHECK(again.message_freq_hz == rec.message_freq_hz);
        CHECK(again.message_phase_rad == rec.message_phase_rad);
    }
}

TEST_CASE("message frequencies land on the integer-cycle grid inside the band") {
    DatasetSpec spec{200, 8, {}};
    auto records = generate_dataset(spec, 4);
    for (const auto& rec : records) {
        CHECK(rec.message_freq_hz >= rec.config.message_freq_lo_hz);
        CHECK(rec.message_freq_hz <= rec.config.message_freq_hi_hz);
        const double cycles = rec.message_freq_hz * rec.config.duration_s;
        CHECK(std::abs(cycles - std::round(cycles)) < 1e-9);
        CHECK(rec.message_phase_rad >= 0.0);
        CHECK(rec.message_phase_rad < 2.0 * std::numbers::pi);
    }
}

TEST_CASE("AM baseband factor stays nonnegative for generated records") {
    DatasetSpec spec{50, 4, {}};
    auto records = generate_dataset(spec);
    for (const auto& rec : records) {
        if (rec.label != ModulationClass::AM) continue;
        auto msg = generate_message(rec.message_freq_hz, rec.message_phase_rad,
                                    rec.config.message_amplitude, rec.config.sample_count(),
                                    rec.config.sample_rate_hz);
        for (double x : msg) CHECK(1.0 + rec.config.mod_index * x >= -1e-12);
    }
}

TEST_CASE("noise-free SSB envelope has vanishing variance") {
    GenConfig cfg;
    cfg.noise_power = 0.0;
    auto rec = generate_record(ModulationClass::SSB, 123, cfg);
    auto env = envelope_hilbert(rec.samples);
    CHECK(variance(env.values) < 1e-10);
}

TEST_CASE("config validation names the offending constraint") {
    GenConfig cfg;
    cfg.carrier_freq_hz = 6000.0; // over Nyquist
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = {};
    cfg.message_freq_hi_hz = 1500.0; // above carrier
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = {};
    cfg.duration_s = 0.0001; // under 16 samples
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = {};
    cfg.mod_index = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = {};
    cfg.message_freq_lo_hz = 210.0; // no multiple of 50 Hz inside
    cfg.message_freq_hi_hz = 240.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = {};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("dataset file round-trips records exactly and bytes exactly") {
    DatasetSpec spec{4, 2718, {}};
    auto records = generate_dataset(spec);

    std::ostringstream first;
    write_dataset(first, spec.config, records);
    std::istringstream input(first.str());
    Dataset ds = read_dataset(input);

    REQUIRE(ds.records.size() == records.size());
    CHECK(ds.config.canonical_string() == spec.config.canonical_string());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(ds.records[i].label == records[i].label);
        CHECK(ds.records[i].seed == records[i].seed);
        CHECK(ds.records[i].message_freq_hz == records[i].message_freq_hz);
        CHECK(ds.records[i].message_phase_rad == records[i].message_phase_rad);
        CHECK(ds.records[i].samples == records[i].samples); // bit-exact through text
    }

    std::ostringstream second;
    write_dataset(second, ds.config, ds.records);
    CHECK(first.str() == second.str());
}

TEST_CASE("dataset reader rejects a header with an invalid config") {
    std::istringstream bad(
        "#rmod-dataset v1 carrier_freq_hz=9000,sample_rate_hz=10000,duration_s=0.02,"
        "noise_power=0.01,mod_index=1,message_freq_lo_hz=200,message_freq_hi_hz=400,"
        "message_amplitude=1,ssb_sideband=upper\n");
    CHECK_THROWS_AS(read_dataset(bad), IoError); // carrier above Nyquist
}

TEST_CASE("dataset reader rejects malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_dataset(empty), IoError);

    std::istringstream bad_magic("#something v1 x=1\n");
    CHECK_THROWS_AS(read_dataset(bad_magic), IoError);

    GenConfig cfg;
    std::ostringstream buf;
    write_dataset(buf, cfg, {});
    std::string text = buf.str() + "AM,250,0,12,1.0,2.0\n"; // too few samples
    std::istringstream short_line(text);
    CHECK_THROWS_AS(read_dataset(short_line), IoError);
}

TEST_CASE("stable_mix spreads seeds and is order-independent") {
    CHECK(stable_mix(1, 0, 0) != stable_mix(1, 0, 1));
    CHECK(stable_mix(1, 0, 0) != stable_mix(1, 1, 0));
    CHECK(stable_mix(1, 2, 3) == stable_mix(1, 2, 3));
    CHECK(stable_mix(2, 0, 0) != stable_mix(1, 0, 0));
}
