#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "measures.hpp"
#include "state_io.hpp"

namespace qdiv {

/// All report documents print numbers to 12 significant digits; the KL
/// infinity prints as the literal token "inf".
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline double parse_real(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError(context + ": \"" + text + "\" is not a number");
    }
    if (used != text.size()) throw ParseError(context + ": \"" + text + "\" is not a number");
    return value;
}

inline std::uint64_t parse_integer(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ParseError(context + ": \"" + text + "\" is not an integer");
    }
    if (used != text.size()) throw ParseError(context + ": \"" + text + "\" is not an integer");
    return static_cast<std::uint64_t>(value);
}

/// Splits "key=a,key=b" style parameter lists of named generators.
inline std::vector<std::pair<std::string, std::string>> parse_params(const std::string& text,
                                                                     const std::string& context) {
    std::vector<std::pair<std::string, std::string>> params;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (item.empty() || eq == std::string::npos || eq == 0)
            throw ParseError(context + ": expected key=value parameters, got \"" + text + "\"");
        params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        pos = comma + 1;
    }
    return params;
}

}  // namespace detail

/// Resolves a state spec: either one of the named generators
///   bell:psi- | bell:psi+ | bell:phi+ | bell:phi-
///   werner:F=<real>
///   maximally-mixed:d=<int>
///   random:d=<int>,seed=<int>
///   random-pure:d=<int>,seed=<int>
/// or, failing a known prefix, a path to a state file.
inline State resolve_state_spec(const std::string& spec) {
    if (spec.rfind("bell:", 0) == 0) {
        const std::string kind = spec.substr(5);
        if (kind == "psi-") return bell_state(BellKind::PsiMinus);
        if (kind == "psi+") return bell_state(BellKind::PsiPlus);
        if (kind == "phi+") return bell_state(BellKind::PhiPlus);
        if (kind == "phi-") return bell_state(BellKind::PhiMinus);
        throw ParseError("unknown Bell state \"" + spec + "\" (psi-, psi+, phi+, phi-)");
    }
    if (spec.rfind("werner:", 0) == 0) {
        const auto params = detail::parse_params(spec.substr(7), spec);
        if (params.size() != 1 || params[0].first != "F")
            throw ParseError(spec + ": expected werner:F=<real>");
        try {
            return werner_state(detail::parse_real(params[0].second, spec));
        } catch (const OutOfRangeError& e) {
            throw ValidationError(spec + ": " + e.what());
        }
    }
    if (spec.rfind("maximally-mixed:", 0) == 0) {
        const auto params = detail::parse_params(spec.substr(16), spec);
        if (params.size() != 1 || params[0].first != "d")
            throw ParseError(spec + ": expected maximally-mixed:d=<int>");
        const std::uint64_t dim = detail::parse_integer(params[0].second, spec);
        if (dim == 0) throw ParseError(spec + ": dimension must be positive");
        return maximally_mixed(static_cast<std::size_t>(dim));
    }
    const bool random_pure_spec = spec.rfind("random-pure:", 0) == 0;
    if (random_pure_spec || spec.rfind("random:", 0) == 0) {
        const auto params =
            detail::parse_params(spec.substr(random_pure_spec ? 12 : 7), spec);
        if (params.size() != 2 || params[0].first != "d" || params[1].first != "seed")
            throw ParseError(spec + ": expected d=<int>,seed=<int>");
        const std::uint64_t dim = detail::parse_integer(params[0].second, spec);
        if (dim == 0) throw ParseError(spec + ": dimension must be positive");
        const std::uint64_t seed = detail::parse_integer(params[1].second, spec);
        if (random_pure_spec) return random_pure(static_cast<std::size_t>(dim), seed);
        return random_density(static_cast<std::size_t>(dim), seed);
    }
    return load_state_file(spec);
}

/// Any state as a density matrix (pure states become projectors).
inline DensityMatrix as_density(const State& state) {
    if (const auto* rho = std::get_if<DensityMatrix>(&state)) return *rho;
    return projector(std::get<PureState>(state));
}

/// A state required to be pure. A density matrix qualifies only when it is
/// rank one; its dominant eigenvector is then the state vector.
inline PureState as_pure(const State& state) {
    if (const auto* psi = std::get_if<PureState>(&state)) return *psi;
    const DensityMatrix& rho = std::get<DensityMatrix>(state);
    const SpectralDecomposition& s = rho.spectrum();
    const std::size_t top = rho.dim() - 1;
    if (s.eigenvalues[top] < 1.0 - 1e-10)
        throw NotPureError("state is mixed: largest eigenvalue " +
                           std::to_string(s.eigenvalues[top]));
    std::vector<Complex> amplitudes(rho.dim());
    for (std::size_t i = 0; i < rho.dim(); ++i) amplitudes[i] = s.eigenvectors(i, top);
    return PureState::normalized(std::move(amplitudes));
}

inline std::size_t state_dim(const State& state) {
    if (const auto* rho = std::get_if<DensityMatrix>(&state)) return rho->dim();
    return std::get<PureState>(state).dim();
}

/// Grid text "start:stop:step" expanded into the closed range, final point
/// clamped onto `stop` so binary round-off cannot overshoot the interval.
inline std::vector<double> parse_grid(const std::string& text, const std::string& context) {
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw ParseError(context + ": expected <start>:<stop>:<step>, got \"" + text + "\"");
    const double start = detail::parse_real(text.substr(0, c1), context);
    const double stop = detail::parse_real(text.substr(c1 + 1, c2 - c1 - 1), context);
    const double step = detail::parse_real(text.substr(c2 + 1), context);
    if (!(step > 0.0)) throw ParseError(context + ": step " + format_number(step) + " must be positive");
    if (stop < start)
        throw ParseError(context + ": stop " + format_number(stop) + " is below start " +
                         format_number(start));
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i)
        values[i] = std::min(start + static_cast<double>(i) * step, stop);
    return values;
}

inline void require_q_values(const std::vector<double>& values, const std::string& context) {
    if (values.empty()) throw ParseError(context + ": grid is empty");
    for (double v : values)
        if (!(v > 0.0 && v < 1.0))
            throw ParseError(context + ": value " + format_number(v) +
                             " outside the open interval (0, 1)");
}

inline void require_f_values(const std::vector<double>& values, const std::string& context) {
    if (values.empty()) throw ParseError(context + ": grid is empty");
    for (double v : values)
        if (!(v >= 0.25 && v <= 1.0))
            throw ParseError(context + ": value " + format_number(v) + " outside [0.25, 1]");
}

inline std::vector<double> default_q_grid() { return parse_grid("0.05:0.95:0.05", "--q-grid"); }
inline std::vector<double> default_f_grid() { return parse_grid("0.25:1.0:0.05", "--f-grid"); }

// ---------------------------------------------------------------------------
// Command runners. Each returns the full output document; the binary in
// tools/ only does flag plumbing around these.
// ---------------------------------------------------------------------------

struct MeasureRequest {
    std::string state;
    std::string reference;
    std::string measure;
    std::optional<double> q;
    std::string format = "json";
};

struct SweepRequest {
    std::string reference = "bell:psi-";
    std::vector<double> q_values = default_q_grid();
    std::vector<double> f_values = default_f_grid();
    std::string format = "csv";
};

struct ReportRequest {
    std::string state;
    std::string reference;
    std::vector<double> q_values = default_q_grid();
};

namespace detail {

inline EntropicIndex require_q(const std::optional<double>& q, const std::string& measure) {
    if (!q) throw PreconditionError("measure \"" + measure + "\" requires --q");
    try {
        return EntropicIndex(*q);
    } catch (const OutOfRangeError& e) {
        throw PreconditionError(e.what());
    }
}

}  // namespace detail

inline std::string run_measure(const MeasureRequest& request) {
    const State state = resolve_state_spec(request.state);
    const State reference = resolve_state_spec(request.reference);

    std::string value;
    if (request.measure == "fidelity") {
        value = format_number(fidelity(as_density(reference), as_density(state)));
    } else if (request.measure == "bures-sq") {
        value = format_number(bures_metric_sq(as_density(reference), as_density(state)));
    } else if (request.measure == "kl-divergence") {
        const DivergenceValue k = kl_divergence(as_density(state), as_density(reference));
        value = k.is_infinite() ? "inf" : format_number(k.value());
    } else if (request.measure == "q-divergence") {
        const EntropicIndex q = detail::require_q(request.q, request.measure);
        value = format_number(q_divergence(as_density(state), as_density(reference), q));
    } else if (request.measure == "q-divergence-pure-ref") {
        const EntropicIndex q = detail::require_q(request.q, request.measure);
        value = format_number(q_divergence_pure_ref(as_density(state), as_pure(reference), q));
    } else if (request.measure == "fubini-study-sq") {
        value = format_number(fubini_study_sq(as_pure(state), as_pure(reference)));
    } else {
        throw ParseError("unknown measure \"" + request.measure +
                         "\" (fidelity, bures-sq, kl-divergence, q-divergence, "
                         "q-divergence-pure-ref, fubini-study-sq)");
    }

    const bool quoted = value == "inf";
    if (request.format == "csv") {
        std::string doc = "measure,value,state,reference,q\n";
        doc += request.measure + "," + value + "," + detail::csv_field(request.state) + "," +
               detail::csv_field(request.reference) + ",";
        doc += (request.q ? format_number(*request.q) : "") + "\n";
        return doc;
    }
    if (request.format != "json")
        throw ParseError("unknown format \"" + request.format + "\" (csv, json)");
    std::string doc = "{\"measure\":\"" + detail::json_escape(request.measure) + "\",";
    doc += "\"value\":" + (quoted ? "\"inf\"" : value) + ",";
    doc += "\"state\":\"" + detail::json_escape(request.state) + "\",";
    doc += "\"reference\":\"" + detail::json_escape(request.reference) + "\"";
    if (request.q) doc += ",\"q\":" + format_number(*request.q);
    doc += "}\n";
    return doc;
}

/// Werner-family sweep: rows are ordered F-major then q. K_q is the general
/// spectral divergence against the resolved reference; K_q_closed is the
/// (1 - F^q)/(1 - q) closed form for the |Psi-> reference, which the K_q
/// column must reproduce under the default reference.
inline std::string run_sweep(const SweepRequest& request) {
    require_q_values(request.q_values, "--q-grid");
    require_f_values(request.f_values, "--f-grid");
    const PureState reference = as_pure(resolve_state_spec(request.reference));
    const DensityMatrix reference_projector = projector(reference);

    struct Row {
        double f, q, kq, closed, fid, bures;
    };
    std::vector<Row> rows;
    rows.reserve(request.f_values.size() * request.q_values.size());
    for (double f : request.f_values) {
        const DensityMatrix w = werner_state(f);
        const double fid = fidelity(reference_projector, w);
        const double bures = bures_metric_sq(reference_projector, w);
        for (double qv : request.q_values) {
            const EntropicIndex q(qv);
            rows.push_back({f, qv, q_divergence(w, reference_projector, q),
                            werner_q_divergence_closed(WernerParameter(f), q), fid, bures});
        }
    }

    if (request.format == "json") {
        std::string doc = "[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Row& r = rows[i];
            doc += std::string(i == 0 ? "" : ",") + "\n  {\"F\":" + format_number(r.f) +
                   ",\"q\":" + format_number(r.q) + ",\"K_q\":" + format_number(r.kq) +
                   ",\"K_q_closed\":" + format_number(r.closed) +
                   ",\"fidelity\":" + format_number(r.fid) +
                   ",\"bures_sq\":" + format_number(r.bures) + "}";
        }
        doc += "\n]\n";
        return doc;
    }
    if (request.format != "csv")
        throw ParseError("unknown format \"" + request.format + "\" (csv, json)");
    std::string doc = "F,q,K_q,K_q_closed,fidelity,bures_sq\n";
    for (const Row& r : rows) {
        doc += format_number(r.f) + "," + format_number(r.q) + "," + format_number(r.kq) + "," +
               format_number(r.closed) + "," + format_number(r.fid) + "," +
               format_number(r.bures) + "\n";
    }
    return doc;
}

/// Purification report: fidelity and Bures distance to the pure reference
/// plus the q-divergence at every requested index.
inline std::string run_report(const ReportRequest& request) {
    require_q_values(request.q_values, "--q");
    const DensityMatrix rho = as_density(resolve_state_spec(request.state));
    const PureState psi = as_pure(resolve_state_spec(request.reference));
    const DensityMatrix psi_projector = projector(psi);

    const double fid = fidelity(psi_projector, rho);
    const double bures = bures_metric_sq(psi_projector, rho);
    std::string doc = "{\n";
    doc += "  \"fidelity\": " + format_number(fid) + ",\n";
    doc += "  \"bures_sq\": " + format_number(bures) + ",\n";
    doc += "  \"k_q\": [\n";
    for (std::size_t i = 0; i < request.q_values.size(); ++i) {
        const EntropicIndex q(request.q_values[i]);
        doc += "    {\"q\": " + format_number(request.q_values[i]) +
               ", \"value\": " + format_number(q_divergence_pure_ref(rho, psi, q)) + "}";
        doc += i + 1 < request.q_values.size() ? ",\n" : "\n";
    }
    doc += "  ]\n}\n";
    return doc;
}

inline std::string run_validate(const std::string& spec) {
    const State state = resolve_state_spec(spec);
    const bool density = std::holds_alternative<DensityMatrix>(state);
    return std::string("{\"kind\":\"") + (density ? "density" : "pure") + "\",\"dim\":" +
           std::to_string(state_dim(state)) + ",\"valid\":true}\n";
}

}  // namespace qdiv
