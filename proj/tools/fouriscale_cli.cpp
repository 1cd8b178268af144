// fouriscale: command-line front end over the header-only library.
//
//   fouriscale verify {lemma|theorem|tiling|consistency|all} [--trials N]
//   fouriscale apply <input> <kernel> <config> <step> <output> [--emit-spectra]
//   fouriscale schedule <config>
//   fouriscale spectrum <input> <image.png> [--centralize] [--profile out.csv] [--raw out.fstn]
//
// Global flags: --json, --seed, --tolerance.
// Exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 I/O error.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "fouriscale/fouriscale.hpp"

namespace fs = std::filesystem;
using namespace fouriscale;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Globals {
    bool json = false;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
};

bool is_png(const fs::path& p) {
    auto ext = p.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".png";
}

Tensor load_any(const fs::path& p) { return is_png(p) ? image_import(p) : load_tensor(p); }

void save_any(const Tensor& t, const fs::path& p) {
    if (is_png(p))
        image_export(t, p);
    else
        save_tensor(t, p);
}

std::string extent_string(const Tensor& t) {
    std::string s;
    for (std::size_t i = 0; i < t.rank(); ++i) s += (i ? "x" : "") + std::to_string(t.dims()[i]);
    return s;
}

std::string filter_summary(const ScheduleStep& s) {
    if (!s.filter_active) return "all-pass";
    const auto& f = s.effective_filter;
    return "lowpass(scale=" + fmt(f.scale_rows) + "x" + fmt(f.scale_cols) + ",ramp="
           + fmt(f.ramp_rows) + "x" + fmt(f.ramp_cols) + ",sigma=" + fmt(f.sigma) + ")";
}

int cmd_verify(const Globals& g, const std::string& suite, std::size_t trials) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = suite_names();
    } else {
        bool known = false;
        for (const auto& n : suite_names()) known = known || n == suite;
        if (!known) {
            std::cerr << "error: unknown suite \"" << suite
                      << "\" (expected lemma, theorem, tiling, consistency, all)\n";
            return kExitUsage;
        }
        names = {suite};
    }
    if (trials < 1) {
        std::cerr << "error: --trials must be >= 1\n";
        return kExitUsage;
    }

    bool ok = true;
    std::vector<SuiteResult> results;
    for (const auto& n : names) {
        results.push_back(run_suite(n, trials, g.seed));
        ok = ok && results.back().passed(g.tolerance);
    }

    if (g.json) {
        json doc{{"generator", Rng::kGenerator},
                 {"seed", g.seed},
                 {"trials", trials},
                 {"tolerance", g.tolerance},
                 {"passed", ok}};
        json arr = json::array();
        for (const auto& r : results)
            arr.push_back({{"suite", r.name},
                           {"cases", r.cases},
                           {"max_residual", r.max_residual},
                           {"passed", r.passed(g.tolerance)}});
        doc["suites"] = arr;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "fouriscale verify generator=" << Rng::kGenerator << " seed=" << g.seed
                  << " trials=" << trials << " tolerance=" << fmt(g.tolerance) << "\n";
        for (const auto& r : results)
            std::cout << r.name << " cases=" << r.cases << " max_residual=" << fmt(r.max_residual)
                      << " " << (r.passed(g.tolerance) ? "PASS" : "FAIL") << "\n";
        std::cout << (ok ? "all suites passed" : "verification failed") << "\n";
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

struct ApplyArgs {
    std::vector<std::string> positional;
    std::string in;
    std::string out;
    bool emit_spectra = false;
};

int cmd_apply(const Globals& g, const ApplyArgs& a) {
    const std::size_t want = 5 - (a.in.empty() ? 0 : 1) - (a.out.empty() ? 0 : 1);
    if (a.positional.size() != want) {
        std::cerr << "error: apply expects <input> <kernel> <config> <step> <output>"
                     " (input/output may be given with --in/--out)\n";
        return kExitUsage;
    }
    std::size_t next = 0;
    const fs::path input = a.in.empty() ? fs::path(a.positional[next++]) : fs::path(a.in);
    const fs::path kernel_path = a.positional[next++];
    const fs::path config_path = a.positional[next++];
    const std::string step_text = a.positional[next++];
    const fs::path output = a.out.empty() ? fs::path(a.positional[next++]) : fs::path(a.out);

    std::size_t t = 0;
    const auto conv = std::from_chars(step_text.data(), step_text.data() + step_text.size(), t);
    if (conv.ec != std::errc() || conv.ptr != step_text.data() + step_text.size()) {
        std::cerr << "error: step: expected a non-negative integer, got \"" << step_text << "\"\n";
        return kExitUsage;
    }

    const ScaleConfig cfg = load_config_file(config_path);
    const Tensor x = load_any(input);
    const Kernel k(load_any(kernel_path));
    const ScheduleStep step = schedule_params(t, cfg);
    const Tensor y = fouriscale_conv(x, k, cfg, step);
    save_any(y, output);

    std::vector<std::string> written{output.string()};
    if (a.emit_spectra) {
        const auto stage = filter_stage(x.channel(0), cfg, step);
        const auto stem = output.parent_path() / output.stem();
        const fs::path pre = stem.string() + "_spectrum_pre.png";
        const fs::path post = stem.string() + "_spectrum_post.png";
        image_export(log_magnitude_image(centralize(stage.before)), pre);
        image_export(log_magnitude_image(centralize(stage.after)), post);
        written.push_back(pre.string());
        written.push_back(post.string());
    }

    if (g.json) {
        json doc{{"input", input.string()},
                 {"output", output.string()},
                 {"dims", y.dims()},
                 {"step", to_json(step)},
                 {"written", written}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "apply input=" << input.string() << " dims=" << extent_string(y)
                  << " t=" << step.t << " dilation=" << step.dilation << " r=" << step.r
                  << " filter=" << filter_summary(step) << "\n";
        for (const auto& w : written) std::cout << "wrote " << w << "\n";
    }
    return kExitOk;
}

int cmd_schedule(const Globals& g, const fs::path& config_path) {
    const ScaleConfig cfg = load_config_file(config_path);
    const auto steps = schedule(cfg);
    if (g.json) {
        json arr = json::array();
        for (const auto& s : steps) arr.push_back(to_json(s));
        std::cout << arr.dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& s : steps)
        std::cout << "t=" << s.t << " dilation=" << s.dilation << " r=" << s.r
                  << " filter=" << filter_summary(s) << "\n";
    return kExitOk;
}

struct SpectrumArgs {
    std::string input;
    std::string output;
    bool centralize = false;
    std::string profile;
    std::string raw;
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + p.string() + " for writing");
    os << text;
    os.close();
    if (!os) throw IoError("failed to write " + p.string());
}

int cmd_spectrum(const Globals& g, const SpectrumArgs& a) {
    const Tensor x = load_any(a.input);
    const Spectrum origin = dft2(x.channel(0));
    const Spectrum shown = a.centralize ? centralize(origin) : origin;
    image_export(log_magnitude_image(shown), a.output);

    std::vector<std::string> written{a.output};
    std::size_t rows = 0;
    if (!a.profile.empty()) {
        const auto profile = log_amplitude_profile(centralize(origin));
        std::string csv;
        for (std::size_t d = 0; d < profile.size(); ++d)
            csv += std::to_string(d) + "," + fmt(profile[d]) + "\n";
        write_text(a.profile, csv);
        rows = profile.size();
        written.push_back(a.profile);
    }
    if (!a.raw.empty()) {
        save_tensor(spectrum_to_tensor(shown), a.raw);
        const json manifest{{"layout", to_string(shown.layout())},
                            {"extent", {shown.rows(), shown.cols()}},
                            {"channels", {"real", "imag"}}};
        const fs::path manifest_path = a.raw + ".json";
        write_text(manifest_path, manifest.dump(2) + "\n");
        written.push_back(a.raw);
        written.push_back(manifest_path.string());
    }

    if (g.json) {
        json doc{{"input", a.input},
                 {"layout", to_string(shown.layout())},
                 {"extent", {shown.rows(), shown.cols()}},
                 {"written", written}};
        if (!a.profile.empty()) doc["profile_rows"] = rows;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "spectrum input=" << a.input << " extent=" << to_string(shown.extent())
                  << " layout=" << to_string(shown.layout()) << "\n";
        for (const auto& w : written) std::cout << "wrote " << w << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FouriScale frequency-domain convolution toolkit", "fouriscale"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_flag("--json", g.json, "Machine-readable JSON report");
    app.add_option("--seed", g.seed, "Seed for randomized verification")->capture_default_str();
    app.add_option("--tolerance", g.tolerance, "Residual tolerance for verify")
        ->capture_default_str();

    std::string suite;
    std::size_t trials = 50;
    auto* verify = app.add_subcommand("verify", "Run numerical verification suites");
    verify->add_option("suite", suite, "lemma | theorem | tiling | consistency | all")->required();
    verify->add_option("--trials", trials, "Randomized trials per suite")->capture_default_str();

    ApplyArgs apply_args;
    auto* apply = app.add_subcommand("apply", "Apply the FouriScale convolution to a tensor or image");
    apply->add_option("args", apply_args.positional, "<input> <kernel> <config> <step> <output>");
    apply->add_option("--in", apply_args.in, "Input tensor or PNG");
    apply->add_option("--out", apply_args.out, "Output tensor or PNG");
    apply->add_flag("--emit-spectra", apply_args.emit_spectra,
                    "Also write pre/post-filter log-amplitude images");

    std::string schedule_config;
    auto* sched = app.add_subcommand("schedule", "Print the per-step annealing schedule");
    sched->add_option("config", schedule_config, "Config JSON")->required();

    SpectrumArgs spec_args;
    auto* spectrum = app.add_subcommand("spectrum", "Render the log-amplitude spectrum");
    spectrum->add_option("input", spec_args.input, "Input tensor or PNG");
    spectrum->add_option("output", spec_args.output, "Output PNG");
    spectrum->add_option("--in", spec_args.input, "Input tensor or PNG");
    spectrum->add_option("--out", spec_args.output, "Output PNG");
    spectrum->add_flag("--centralize", spec_args.centralize, "Move DC to the image centre");
    spectrum->add_option("--profile", spec_args.profile, "Write the ring profile as CSV");
    spectrum->add_option("--raw", spec_args.raw, "Write the spectrum as a 2xHxW tensor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(g, suite, trials);
        if (*apply) return cmd_apply(g, apply_args);
        if (*sched) return cmd_schedule(g, schedule_config);
        if (*spectrum) {
            if (spec_args.input.empty() || spec_args.output.empty()) {
                std::cerr << "error: spectrum expects <input> <output.png>\n";
                return kExitUsage;
            }
            return cmd_spectrum(g, spec_args);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
