// eegdist: command-line front end for the DWT codec, distortion metrics and
// the regression / channel studies.
//
// Exit codes: 0 success, 1 usage error, 2 invalid data, 3 internal error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eegdist/eegdist.hpp"

namespace fs = std::filesystem;
using namespace eegdist;

namespace {

std::vector<std::uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure on '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write failure on '" + path + "'");
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

LogBase parse_log_base(const std::string& s) {
    if (s == "10") return LogBase::Ten;
    if (s == "e") return LogBase::Natural;
    throw InvalidArgument("--log-base must be 10 or e");
}

std::string g(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string boxplot_csv(const std::vector<BoxplotSummary>& boxes) {
    std::string out = "channel,name,n,min,q1,median,q3,max,lower_whisker,upper_whisker,n_outliers\n";
    for (const auto& b : boxes)
        out += std::to_string(b.channel) + "," + b.name + "," + std::to_string(b.n) + "," +
               detail::format_double(b.min) + "," + detail::format_double(b.q1) + "," +
               detail::format_double(b.median) + "," + detail::format_double(b.q3) + "," +
               detail::format_double(b.max) + "," + detail::format_double(b.lower_whisker) + "," +
               detail::format_double(b.upper_whisker) + "," + std::to_string(b.outliers.size()) + "\n";
    return out;
}

Signal obtain_signal(const std::string& path, std::optional<std::uint64_t> synth_seed, double rate) {
    if (!path.empty()) return load_ascii_signal(path, rate);
    if (synth_seed) return synth_eeg(*synth_seed, 4096, rate);
    throw InvalidArgument("either --signal or --synthetic-seed is required");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DWT EEG encoder, distortion metrics and distortion modeling"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "eegdist bitstream version " + std::to_string(kBitstreamVersion));

    double rate = kDefaultSamplingRate;
    std::string log_base_name = "10";

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "Compress a signal into an EEGC block");
    std::string enc_in, enc_out;
    double enc_cr = 0.0;
    int enc_f = 8, enc_levels = kDefaultLevels, enc_qbits = kDefaultQuantBits;
    encode_cmd->add_option("--in", enc_in, "ASCII signal, one sample per line")->required();
    encode_cmd->add_option("--cr", enc_cr, "target compression ratio in percent")->required();
    encode_cmd->add_option("--filter-length", enc_f, "Daubechies filter length (2..20, even)")->required();
    encode_cmd->add_option("--levels", enc_levels, "decomposition depth")->capture_default_str();
    encode_cmd->add_option("--qbits", enc_qbits, "quantizer resolution in bits")->capture_default_str();
    encode_cmd->add_option("--out", enc_out, "output block file")->required();
    encode_cmd->add_option("--rate", rate, "sampling rate (Hz)")->capture_default_str();

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "Reconstruct a signal from an EEGC block");
    std::string dec_in, dec_out;
    bool dec_lenient = false;
    decode_cmd->add_option("--in", dec_in, "block file")->required();
    decode_cmd->add_option("--out", dec_out, "output ASCII signal")->required();
    decode_cmd->add_flag("--lenient", dec_lenient, "best-effort decode of corrupted blocks");
    decode_cmd->add_option("--rate", rate, "sampling rate (Hz)")->capture_default_str();

    // prd
    auto* prd_cmd = app.add_subcommand("prd", "Percentage root-mean-square difference of two signals");
    std::string prd_a, prd_b;
    prd_cmd->add_option("--original", prd_a)->required();
    prd_cmd->add_option("--reconstructed", prd_b)->required();
    prd_cmd->add_option("--log-base", log_base_name, "10 or e")->capture_default_str();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic EEG signal");
    std::uint64_t synth_seed_value = 7;
    std::size_t synth_ns = 4096;
    std::string synth_out;
    synth_cmd->add_option("--seed", synth_seed_value)->capture_default_str();
    synth_cmd->add_option("--ns", synth_ns)->capture_default_str();
    synth_cmd->add_option("--out", synth_out)->required();
    synth_cmd->add_option("--rate", rate, "sampling rate (Hz)")->capture_default_str();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Ideal/noisy-channel distortion sweep over (Cr, F, L)");
    std::string sweep_cfg, sweep_signal, sweep_out;
    std::optional<std::uint64_t> sweep_synth, sweep_seed;
    sweep_cmd->add_option("--config", sweep_cfg, "experiment config file");
    sweep_cmd->add_option("--signal", sweep_signal, "ASCII signal");
    sweep_cmd->add_option("--synthetic-seed", sweep_synth, "use a 4096-sample synthetic signal instead");
    sweep_cmd->add_option("--seed", sweep_seed, "override master_seed");
    sweep_cmd->add_option("--out", sweep_out, "records CSV")->required();
    sweep_cmd->add_option("--rate", rate, "sampling rate (Hz)")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit the log-linear distortion model");
    std::string fit_data, fit_model = "full", fit_out;
    fit_cmd->add_option("--data", fit_data, "records CSV")->required();
    fit_cmd->add_option("--model", fit_model, "full | reduced1 | reduced2")
        ->check(CLI::IsMember({"full", "reduced1", "reduced2"}))
        ->capture_default_str();
    fit_cmd->add_option("--out", fit_out, "fit JSON");

    // select
    auto* select_cmd = app.add_subcommand("select", "Backward model selection with nested ANOVA");
    std::string sel_data, sel_out;
    double sel_alpha = 0.05;
    select_cmd->add_option("--data", sel_data, "records CSV")->required();
    select_cmd->add_option("--alpha", sel_alpha, "keep terms with p <= alpha")->capture_default_str();
    select_cmd->add_option("--out", sel_out, "report JSON");

    // channel-study
    auto* study_cmd = app.add_subcommand("channel-study", "Distortion under the channel models, ANOVA and Tukey HSD");
    std::string study_cfg, study_signal, study_dir;
    std::optional<std::uint64_t> study_synth, study_seed;
    study_cmd->add_option("--config", study_cfg, "experiment config file");
    study_cmd->add_option("--signal", study_signal, "ASCII signal");
    study_cmd->add_option("--synthetic-seed", study_synth, "use a 4096-sample synthetic signal instead");
    study_cmd->add_option("--seed", study_seed, "override master_seed");
    study_cmd->add_option("--out-dir", study_dir, "output directory")->required();
    study_cmd->add_option("--rate", rate, "sampling rate (Hz)")->capture_default_str();

    // ztest
    auto* z_cmd = app.add_subcommand("ztest", "Two-sample z test on the difference of means");
    double m1 = 0, s1 = 0, m2 = 0, s2 = 0;
    std::size_t n1 = 0, n2 = 0;
    z_cmd->add_option("--mean1", m1)->required();
    z_cmd->add_option("--sd1", s1)->required();
    z_cmd->add_option("--n1", n1)->required();
    z_cmd->add_option("--mean2", m2)->required();
    z_cmd->add_option("--sd2", s2)->required();
    z_cmd->add_option("--n2", n2)->required();

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict distortion from Cr and F");
    double pred_cr = 0.0, pred_f = 0.0;
    std::string pred_fit;
    bool pred_paper = false;
    predict_cmd->add_option("--cr", pred_cr)->required();
    predict_cmd->add_option("--filter-length", pred_f)->required();
    auto* fit_opt = predict_cmd->add_option("--fit", pred_fit, "fit JSON with terms cr, filter_length");
    auto* paper_opt = predict_cmd->add_flag("--paper", pred_paper, "use the built-in reference coefficients");
    fit_opt->excludes(paper_opt);
    paper_opt->excludes(fit_opt);

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Render records as an SVG chart");
    std::string plot_data, plot_kind = "lines", plot_out;
    plot_cmd->add_option("--data", plot_data, "records CSV")->required();
    plot_cmd->add_option("--kind", plot_kind, "surface | lines | box")
        ->check(CLI::IsMember({"surface", "lines", "box"}))
        ->capture_default_str();
    plot_cmd->add_option("--out", plot_out, "SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*encode_cmd) {
            const Signal s = load_ascii_signal(enc_in, rate);
            const EncodedBlock block = encode(s, {enc_f, enc_levels}, enc_cr, enc_qbits);
            write_binary(enc_out, serialize(block));
            std::cout << "ns = " << block.header.ns << "\nM = " << block.retained()
                      << "\ncompression_ratio = " << g(block.compression_ratio()) << "\nbytes = " << block.total_bytes()
                      << '\n';
        } else if (*decode_cmd) {
            const auto bytes = read_binary(dec_in);
            const EncodedBlock block = deserialize(bytes, dec_lenient);
            write_ascii_signal(decode(block, dec_lenient, rate), dec_out);
        } else if (*prd_cmd) {
            const LogBase base = parse_log_base(log_base_name);
            const Signal a = load_ascii_signal(prd_a);
            const Signal b = load_ascii_signal(prd_b);
            const double ds = prd(a.samples(), b.samples());
            std::cout << "Ds = " << g(ds) << '\n';
            if (ds > 0.0)
                std::cout << "D = " << g(log_distortion(ds, base)) << '\n';
            else
                std::cout << "D = NA (zero distortion)\n";
        } else if (*synth_cmd) {
            write_ascii_signal(synth_eeg(synth_seed_value, synth_ns, rate), synth_out);
        } else if (*sweep_cmd) {
            SweepConfig cfg = sweep_cfg.empty() ? SweepConfig{} : load_config(sweep_cfg).sweep;
            if (sweep_seed) cfg.master_seed = *sweep_seed;
            const Signal s = obtain_signal(sweep_signal, sweep_synth, rate);
            const auto records = run_sweep(s, cfg);
            write_records(records, sweep_out);
            std::cout << records.size() << " records written to " << sweep_out << '\n';
        } else if (*fit_cmd) {
            const auto records = read_records(fit_data);
            const auto terms = fit_model == "full"       ? full_model_terms()
                               : fit_model == "reduced1" ? reduced1_terms()
                                                         : reduced2_terms();
            const auto fit = fit_log_distortion(records, terms);
            std::cout << format_fit(fit);
            if (!fit_out.empty()) write_json(fit_out, to_json(fit));
        } else if (*select_cmd) {
            const auto records = read_records(sel_data);
            const auto report = model_selection(records, sel_alpha);
            for (std::size_t i = 0; i < report.fits.size(); ++i) {
                std::cout << (i == 0 ? "# Full model\n" : "# Reduced model " + std::to_string(i) + " (removed " +
                                                              report.dropped[i - 1] + ")\n")
                          << format_fit(report.fits[i]) << '\n';
                if (i > 0)
                    std::cout << format_nested_anova(report.versus_full[i - 1], report.fits.front(), report.fits[i])
                              << '\n';
            }
            std::cout << "Chosen model: " << formula(report.chosen()) << '\n';
            if (report.excluded_zero_prd)
                std::cout << report.excluded_zero_prd << " zero-distortion records excluded\n";
            if (!sel_out.empty()) write_json(sel_out, to_json(report));
        } else if (*study_cmd) {
            ChannelStudyConfig cfg = study_cfg.empty() ? ChannelStudyConfig{} : load_config(study_cfg).study;
            if (study_seed) cfg.master_seed = *study_seed;
            const Signal s = obtain_signal(study_signal, study_synth, rate);
            const auto result = run_channel_study(s, cfg);
            fs::create_directories(study_dir);
            const fs::path dir(study_dir);
            write_records(result.records, (dir / "records.csv").string());
            write_json((dir / "anova.json").string(), to_json(result.anova));
            write_json((dir / "tukey.json").string(), to_json(result.tukey));
            write_text((dir / "boxplot.csv").string(), boxplot_csv(result.boxplots));
            std::cout << format_one_way_anova(result.anova) << '\n' << format_tukey(result.tukey);
        } else if (*z_cmd) {
            const auto z = stats::two_sample_ztest(m1, s1, n1, m2, s2, n2);
            std::cout << "z = " << g(z.z) << "\nalpha = " << g(z.alpha) << '\n';
        } else if (*predict_cmd) {
            if (!pred_paper && pred_fit.empty()) throw InvalidArgument("predict needs --paper or --fit FILE");
            DistortionModel model = DistortionModel::paper();
            if (!pred_fit.empty()) {
                std::ifstream in(pred_fit);
                if (!in) throw IoError("cannot open fit file '" + pred_fit + "'");
                Json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw ParseError(std::string("fit file is not valid JSON: ") + e.what(), 0);
                }
                model = DistortionModel::from_fit(regression_fit_from_json(j));
            }
            const auto p = predict_distortion(model, pred_cr, pred_f);
            if (p.extrapolated) std::cerr << "warning: inputs lie outside the fitted ranges\n";
            std::cout << "D = " << g(p.log_distortion) << "\nDs = " << g(p.prd) << '\n';
        } else if (*plot_cmd) {
            const auto records = read_records(plot_data);
            const std::string svg = plot_kind == "lines"     ? svg::lines_chart(records)
                                    : plot_kind == "surface" ? svg::surface_chart(records)
                                                             : svg::box_chart(records);
            write_text(plot_out, svg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
