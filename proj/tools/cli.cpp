#include "cli.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "teda/csv.hpp"
#include "teda/detector.hpp"
#include "teda/error.hpp"
#include "teda/eval.hpp"
#include "teda/pipeline.hpp"
#include "teda/properties.hpp"
#include "teda/synth.hpp"

namespace teda::cli {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    return out;
}

bool parse_uint_token(std::string_view token, std::uint64_t& out) {
    if (token.empty()) return false;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

// "start:end:shape:magnitude", e.g. "100:150:level-shift:8".
FaultSpec parse_fault(const std::string& text) {
    std::vector<std::string_view> parts;
    std::string_view rest = text;
    for (;;) {
        const std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos) {
            parts.push_back(rest);
            break;
        }
        parts.push_back(rest.substr(0, colon));
        rest.remove_prefix(colon + 1);
    }
    if (parts.size() != 4) {
        throw ConfigError("--fault expects start:end:shape:magnitude, got '" + text +
                          "'");
    }
    FaultSpec fault;
    if (!parse_uint_token(parts[0], fault.segment.start_k) ||
        !parse_uint_token(parts[1], fault.segment.end_k)) {
        throw ConfigError("--fault has non-numeric bounds in '" + text + "'");
    }
    if (parts[2] == "level-shift") {
        fault.shape = FaultShape::LevelShift;
    } else if (parts[2] == "pressure-drop") {
        fault.shape = FaultShape::PressureDropRamp;
    } else if (parts[2] == "spike") {
        fault.shape = FaultShape::Spike;
    } else {
        throw ConfigError("--fault shape must be level-shift, pressure-drop or spike, "
                          "got '" + std::string(parts[2]) + "'");
    }
    if (!parse_real(parts[3], fault.magnitude)) {
        throw ConfigError("--fault has a non-numeric magnitude in '" + text + "'");
    }
    return fault;
}

void add_detector_flags(CLI::App* cmd, DetectorConfig& config) {
    cmd->add_option("--m", config.m,
                    "Detection sensitivity (threshold is (m^2+1)/(2k))")
        ->capture_default_str();
    cmd->add_option("--variance-mode", config.variance_mode,
                    "Variance recursion: 'paper' (hardware recursion) or 'exact' "
                    "(population variance)")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, VarianceMode>{
                {"paper", VarianceMode::PaperEq3},
                {"exact", VarianceMode::ExactPopulation}},
            CLI::ignore_case))
        ->default_str("paper");
    cmd->add_option("--zero-variance", config.zero_variance_policy,
                    "Zero-variance verdict policy: 'one-over-k' or 'not-outlier'")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, ZeroVariancePolicy>{
                {"one-over-k", ZeroVariancePolicy::EccentricityIsOneOverK},
                {"not-outlier", ZeroVariancePolicy::NotOutlier}},
            CLI::ignore_case))
        ->default_str("one-over-k");
}

struct DetectArgs {
    std::string input;
    std::string output;
    DetectorConfig config;
};

int cmd_detect(const DetectArgs& args, std::ostream& out) {
    std::ifstream in = open_input(args.input);
    CsvSampleReader reader(in);
    DetectorState state;
    std::uint64_t samples = 0;
    std::uint64_t outliers = 0;

    auto emit = [&](std::ostream& sink) {
        write_verdicts_header(sink);
        while (auto x = reader.next()) {
            const SampleVerdict v = advance(state, *x, args.config);
            write_verdict_row(sink, v);
            ++samples;
            outliers += v.outlier ? 1 : 0;
        }
    };

    if (args.output.empty()) {
        emit(out);
    } else {
        std::ofstream file = open_output(args.output);
        emit(file);
        nlohmann::json j;
        j["samples"] = samples;
        j["outliers"] = outliers;
        j["output"] = args.output;
        out << j.dump() << '\n';
    }
    return 0;
}

struct SimulateArgs {
    std::string input;
    std::string output;
    DetectorConfig config;
    Real tc_ns = 138;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    std::ifstream in = open_input(args.input);
    const StreamBuffer samples = read_csv_stream(in);
    const auto trace = simulate(samples, args.config);

    std::uint64_t outliers = 0;
    for (const TraceEntry& entry : trace) outliers += entry.verdict.outlier ? 1 : 0;

    if (args.output.empty()) {
        write_trace_csv(out, trace);
        return 0;
    }
    std::ofstream file = open_output(args.output);
    write_trace_csv(file, trace);

    const TimingModel model{args.tc_ns};
    nlohmann::json j;
    j["samples"] = samples.size();
    j["total_cycles"] = trace.empty() ? 0 : trace.back().cycle + 1;
    j["outliers"] = outliers;
    j["tc_ns"] = args.tc_ns;
    j["initial_delay_ns"] = initial_delay_ns(model);
    j["sample_period_ns"] = sample_period_ns(model);
    j["throughput_sps"] = throughput_sps(model);
    out << j.dump() << '\n';
    return 0;
}

struct SynthArgs {
    std::string output;
    std::string segments_path;
    SynthSpec spec;
    std::uint64_t seed = 42;
    std::vector<std::string> fault_texts;
    std::vector<int> damadics_items;
    Real damadics_magnitude = 5;
};

int cmd_synth(SynthArgs args, std::ostream& out) {
    for (const std::string& text : args.fault_texts) {
        args.spec.faults.push_back(parse_fault(text));
    }
    for (int item : args.damadics_items) {
        FaultSpec fault;
        fault.segment = damadics_segment(item);
        fault.shape = FaultShape::PressureDropRamp;
        fault.magnitude = args.damadics_magnitude;
        args.spec.faults.push_back(fault);
    }

    const LabeledStream labeled = generate(args.spec, args.seed);

    std::string segments_path = args.segments_path;
    if (segments_path.empty() && !args.output.empty() && !labeled.segments.empty()) {
        std::filesystem::path p(args.output);
        p.replace_extension("");
        segments_path = p.string() + ".segments.csv";
    }
    if (!segments_path.empty()) {
        std::ofstream file = open_output(segments_path);
        write_segments_csv(file, labeled.segments);
    }

    if (args.output.empty()) {
        write_csv_stream(out, labeled.samples);
        return 0;
    }
    std::ofstream file = open_output(args.output);
    write_csv_stream(file, labeled.samples);

    nlohmann::json j;
    j["samples"] = labeled.samples.size();
    j["dims"] = labeled.samples.dims();
    j["seed"] = labeled.seed;
    j["output"] = args.output;
    if (!segments_path.empty()) j["segments_output"] = segments_path;
    nlohmann::json segs = nlohmann::json::array();
    for (const FaultSegment& seg : labeled.segments) {
        segs.push_back({{"start_k", seg.start_k},
                        {"end_k", seg.end_k},
                        {"label", seg.label}});
    }
    j["segments"] = std::move(segs);
    out << j.dump() << '\n';
    return 0;
}

struct BenchArgs {
    std::string input;
    std::string output;
    DetectorConfig config;
    std::uint64_t reps = 5;
    std::uint64_t streams = 1;
    std::uint64_t length = 0;
    std::size_t dims = 2;
    std::uint64_t seed = 42;
};

int cmd_bench(const BenchArgs& args, std::ostream& out) {
    StreamBuffer samples;
    if (!args.input.empty()) {
        std::ifstream in = open_input(args.input);
        samples = read_csv_stream(in);
    } else if (args.length > 0) {
        SynthSpec spec;
        spec.length = args.length;
        spec.dims = args.dims;
        samples = generate(spec, args.seed).samples;
    } else {
        throw ConfigError("bench needs --input or a synthetic --length");
    }

    const BenchReport report = bench(samples, args.config, args.reps, args.streams);
    const std::string json = bench_to_json(report);
    out << json << '\n';
    if (!args.output.empty()) {
        std::ofstream file = open_output(args.output);
        file << json << '\n';
    }
    return 0;
}

struct ScoreArgs {
    std::string verdicts_path;
    std::string segments_path;
    std::string output;
};

int cmd_score(const ScoreArgs& args, std::ostream& out) {
    std::ifstream verdicts_file = open_input(args.verdicts_path);
    const auto verdicts = read_verdicts_csv(verdicts_file);
    std::ifstream segments_file = open_input(args.segments_path);
    const auto segments = read_segments_csv(segments_file);

    const DetectionMetrics metrics = score(verdicts, segments);
    const std::string json = metrics_to_json(metrics);
    out << json << '\n';
    if (!args.output.empty()) {
        std::ofstream file = open_output(args.output);
        file << json << '\n';
    }
    return 0;
}

struct OracleCheckArgs {
    PropertyOptions options;
};

int cmd_oracle_check(const OracleCheckArgs& args, std::ostream& out) {
    const auto results = run_property_suite(args.options);
    std::size_t passed = 0, failed = 0, skipped = 0;
    for (const PropertyResult& r : results) {
        const char* status = "PASS";
        if (r.status == PropertyStatus::Fail) {
            status = "FAIL";
            ++failed;
        } else if (r.status == PropertyStatus::Skip) {
            status = "SKIP";
            ++skipped;
        } else {
            ++passed;
        }
        out << status << ' ' << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ')';
        out << '\n';
    }
    out << passed << " passed, " << skipped << " skipped, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Streaming eccentricity-based anomaly detection and a cycle-level "
                 "simulator of its pipelined architecture"};
    app.require_subcommand(1);

    DetectArgs detect_args;
    CLI::App* detect = app.add_subcommand(
        "detect", "Classify a CSV sample stream row by row");
    detect->add_option("--input,-i", detect_args.input, "Samples CSV (rows = samples)")
        ->required();
    detect->add_option("--output,-o", detect_args.output,
                       "Verdicts CSV (default: stdout)");
    add_detector_flags(detect, detect_args.config);

    SimulateArgs simulate_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Run the four-stage pipeline model over a CSV stream");
    sim->add_option("--input,-i", simulate_args.input, "Samples CSV")->required();
    sim->add_option("--output,-o", simulate_args.output,
                    "Cycle trace CSV (default: stdout)");
    sim->add_option("--tc-ns", simulate_args.tc_ns,
                    "Critical-path time per stage in nanoseconds")
        ->capture_default_str();
    add_detector_flags(sim, simulate_args.config);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a noisy stream with labeled fault segments");
    synth->add_option("--output,-o", synth_args.output, "Samples CSV (default: stdout)");
    synth->add_option("--segments", synth_args.segments_path,
                      "Ground-truth segments CSV (default: <output>.segments.csv)");
    synth->add_option("--length,-n", synth_args.spec.length, "Stream length")
        ->required();
    synth->add_option("--dims,-d", synth_args.spec.dims, "Dimensions per sample")
        ->capture_default_str();
    synth->add_option("--level", synth_args.spec.level,
                      "Baseline level (one value, or one per dimension)");
    synth->add_option("--noise", synth_args.spec.noise_amplitude,
                      "Noise amplitude (one value, or one per dimension)");
    synth->add_option("--noise-kind", synth_args.spec.noise,
                      "Noise distribution: 'gaussian' or 'uniform'")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, NoiseKind>{{"gaussian", NoiseKind::Gaussian},
                                             {"uniform", NoiseKind::Uniform}},
            CLI::ignore_case))
        ->default_str("gaussian");
    synth->add_option("--fault", synth_args.fault_texts,
                      "Fault as start:end:shape:magnitude (repeatable); shapes: "
                      "level-shift, pressure-drop, spike");
    synth->add_option("--damadics-item", synth_args.damadics_items,
                      "Add an actuator-benchmark fault window, items 1..7 "
                      "(repeatable)");
    synth->add_option("--damadics-magnitude", synth_args.damadics_magnitude,
                      "Magnitude for --damadics-item faults")
        ->capture_default_str();
    synth->add_option("--seed", synth_args.seed, "Generator seed")
        ->capture_default_str();

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand(
        "bench", "Measure software-detector throughput");
    bench_cmd->add_option("--input,-i", bench_args.input, "Samples CSV");
    bench_cmd->add_option("--output,-o", bench_args.output, "Also write the JSON here");
    bench_cmd->add_option("--reps", bench_args.reps, "Repetitions (median is reported)")
        ->capture_default_str();
    bench_cmd->add_option("--streams", bench_args.streams,
                          "Independent detectors run in parallel threads")
        ->capture_default_str();
    bench_cmd
        ->add_option("--length,-n", bench_args.length,
                     "Generate a synthetic stream of this length instead of --input")
        ->capture_default_str();
    bench_cmd->add_option("--dims,-d", bench_args.dims, "Synthetic stream dimensions")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_args.seed, "Synthetic stream seed")
        ->capture_default_str();
    add_detector_flags(bench_cmd, bench_args.config);

    ScoreArgs score_args;
    CLI::App* score_cmd = app.add_subcommand(
        "score", "Score a verdict file against ground-truth segments");
    score_cmd->add_option("--verdicts", score_args.verdicts_path, "Verdicts CSV")
        ->required();
    score_cmd->add_option("--segments", score_args.segments_path, "Segments CSV")
        ->required();
    score_cmd->add_option("--output,-o", score_args.output, "Also write the JSON here");

    OracleCheckArgs oracle_args;
    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "Run the randomized invariant suite and print one line per "
                        "property");
    oracle->add_option("--seed", oracle_args.options.seed, "Suite seed")
        ->capture_default_str();
    oracle->add_option("--streams", oracle_args.options.stream_count,
                       "Random streams per property")
        ->capture_default_str();
    oracle->add_option("--max-length", oracle_args.options.max_length,
                       "Maximum stream length")
        ->capture_default_str();
    oracle->add_option("--max-dims", oracle_args.options.max_dims,
                       "Maximum dimensions")
        ->capture_default_str();
    oracle->add_option("--variance-mode", oracle_args.options.mode,
                       "Variance recursion under test: 'paper' or 'exact'")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, VarianceMode>{
                {"paper", VarianceMode::PaperEq3},
                {"exact", VarianceMode::ExactPopulation}},
            CLI::ignore_case))
        ->default_str("paper");

    int code = 0;
    detect->callback([&] { code = cmd_detect(detect_args, out); });
    sim->callback([&] { code = cmd_simulate(simulate_args, out); });
    synth->callback([&] { code = cmd_synth(synth_args, out); });
    bench_cmd->callback([&] { code = cmd_bench(bench_args, out); });
    score_cmd->callback([&] { code = cmd_score(score_args, out); });
    oracle->callback([&] { code = cmd_oracle_check(oracle_args, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return code;
}

int run_cli(int argc, const char* const* argv) {
    return run_cli(argc, argv, std::cout, std::cerr);
}

} // namespace teda::cli
