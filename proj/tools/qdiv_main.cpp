#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdiv/qdiv.hpp"

namespace {

// Exit codes: 0 success, 2 parse/validation error, 3 dimension/precondition error.
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;

void emit(const std::string& document, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << document;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw qdiv::ParseError("cannot open output file: " + output_path);
    out << document;
}

std::vector<double> q_list_from_flags(const std::vector<double>& q_flags,
                                      const std::string& q_grid) {
    if (!q_flags.empty() && !q_grid.empty())
        throw qdiv::ParseError("--q and --q-grid are mutually exclusive");
    if (!q_flags.empty()) return q_flags;
    if (!q_grid.empty()) return qdiv::parse_grid(q_grid, "--q-grid");
    return qdiv::default_q_grid();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum state divergence toolkit"};
    app.require_subcommand(1);

    std::string state_spec, reference_spec, measure_name, output_path;
    std::string q_grid_text, f_grid_text, format;
    std::optional<double> q_value;
    std::vector<double> q_list;

    auto* measure = app.add_subcommand("measure", "evaluate one measure for a state pair");
    measure->add_option("--state", state_spec, "state spec (generator or file)")->required();
    measure->add_option("--reference", reference_spec, "reference state spec")->required();
    measure->add_option("--measure", measure_name,
                        "fidelity | bures-sq | kl-divergence | q-divergence | "
                        "q-divergence-pure-ref | fubini-study-sq")
        ->required();
    measure->add_option("--q", q_value, "entropic index in (0, 1)");
    measure->add_option("--output", output_path, "output path (default stdout)");
    measure->add_option("--format", format, "csv | json (default json)");

    auto* sweep = app.add_subcommand("sweep", "tabulate K_q over the Werner family");
    sweep->add_option("--reference", reference_spec, "pure reference (default bell:psi-)");
    sweep->add_option("--q-grid", q_grid_text, "start:stop:step (default 0.05:0.95:0.05)");
    sweep->add_option("--f-grid", f_grid_text, "start:stop:step (default 0.25:1.0:0.05)");
    sweep->add_option("--output", output_path, "output path (default stdout)");
    sweep->add_option("--format", format, "csv | json (default csv)");

    auto* report = app.add_subcommand("report", "purification report against a pure reference");
    report->add_option("--state", state_spec, "state spec (generator or file)")->required();
    report->add_option("--reference", reference_spec, "pure reference spec")->required();
    report->add_option("--q", q_list, "entropic index, repeatable");
    report->add_option("--q-grid", q_grid_text, "start:stop:step grid of entropic indices");
    report->add_option("--output", output_path, "output path (default stdout)");

    auto* validate = app.add_subcommand("validate", "parse and validate a state spec");
    validate->add_option("--state", state_spec, "state spec (generator or file)")->required();
    validate->add_option("--output", output_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitParse;
    }

    try {
        if (measure->parsed()) {
            qdiv::MeasureRequest request{state_spec, reference_spec, measure_name, q_value,
                                         format.empty() ? "json" : format};
            emit(qdiv::run_measure(request), output_path);
        } else if (sweep->parsed()) {
            qdiv::SweepRequest request;
            if (!reference_spec.empty()) request.reference = reference_spec;
            if (!q_grid_text.empty()) request.q_values = qdiv::parse_grid(q_grid_text, "--q-grid");
            if (!f_grid_text.empty()) request.f_values = qdiv::parse_grid(f_grid_text, "--f-grid");
            if (!format.empty()) request.format = format;
            emit(qdiv::run_sweep(request), output_path);
        } else if (report->parsed()) {
            qdiv::ReportRequest request;
            request.state = state_spec;
            request.reference = reference_spec;
            request.q_values = q_list_from_flags(q_list, q_grid_text);
            emit(qdiv::run_report(request), output_path);
        } else if (validate->parsed()) {
            emit(qdiv::run_validate(state_spec), output_path);
        }
    } catch (const qdiv::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qdiv::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qdiv::DimensionMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const qdiv::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const qdiv::OutOfRangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const qdiv::NotPureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
