#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qdiv/cli.hpp"

using namespace qdiv;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

TEST_CASE("number formatting", "[cli]") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.3266799469318489) == "0.326679946932");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("state spec parsing", "[cli]") {
    SECTION("named generators") {
        const PureState psi = std::get<PureState>(resolve_state_spec("bell:psi-"));
        CHECK(psi.amplitudes() == bell_state(BellKind::PsiMinus).amplitudes());
        const auto w = std::get<DensityMatrix>(resolve_state_spec("werner:F=0.7"));
        CHECK(w.matrix().max_abs_diff(werner_state(0.7).matrix()) == 0.0);
        const auto mm = std::get<DensityMatrix>(resolve_state_spec("maximally-mixed:d=3"));
        CHECK(mm.matrix().max_abs_diff(maximally_mixed(3).matrix()) == 0.0);
        const auto rd = std::get<DensityMatrix>(resolve_state_spec("random:d=4,seed=7"));
        CHECK(rd.matrix().entries() == random_density(4, 7).matrix().entries());
        const auto rp = std::get<PureState>(resolve_state_spec("random-pure:d=2,seed=9"));
        CHECK(rp.amplitudes() == random_pure(2, 9).amplitudes());
    }
    SECTION("malformed generators") {
        CHECK_THROWS_AS(resolve_state_spec("bell:xyz"), ParseError);
        CHECK_THROWS_AS(resolve_state_spec("werner:F=abc"), ParseError);
        CHECK_THROWS_AS(resolve_state_spec("werner:G=0.5"), ParseError);
        CHECK_THROWS_AS(resolve_state_spec("maximally-mixed:d=0"), ParseError);
        CHECK_THROWS_AS(resolve_state_spec("random:d=2"), ParseError);
    }
    SECTION("out-of-range werner parameter") {
        CHECK_THROWS_AS(resolve_state_spec("werner:F=1.2"), ValidationError);
    }
    SECTION("unknown prefix falls through to a file path") {
        CHECK_THROWS_AS(resolve_state_spec("/no/such/state/file.json"), ParseError);
    }
}

TEST_CASE("state file format", "[cli]") {
    SECTION("density document") {
        const std::string doc =
            R"({"kind": "density", "dim": 2, "entries": [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]})";
        const auto rho = std::get<DensityMatrix>(parse_state_json(doc));
        CHECK(rho.matrix().max_abs_diff(maximally_mixed(2).matrix()) == 0.0);
    }
    SECTION("pure document") {
        const double r = std::sqrt(0.5);
        std::ostringstream doc;
        doc << R"({"kind": "pure", "dim": 4, "entries": [[0, 0], [)" << std::setprecision(17) << r
            << R"(, 0], [)" << -r << R"(, 0], [0, 0]]})";
        const auto psi = std::get<PureState>(parse_state_json(doc.str()));
        CHECK(psi.amplitudes() == bell_state(BellKind::PsiMinus).amplitudes());
    }
    SECTION("validation failure names the broken invariant") {
        const std::string doc =
            R"({"kind": "density", "dim": 2, "entries": [[0.6, 0], [0, 0], [0, 0], [0.6, 0]]})";
        try {
            parse_state_json(doc);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("trace") != std::string::npos);
        }
    }
    SECTION("malformed document reports a position") {
        try {
            parse_state_json("{\"kind\": \"density\",\n  \"dim\": }");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SECTION("field errors carry the field name") {
        CHECK_THROWS_WITH(parse_state_json(R"({"kind": "density", "dim": 2, "entries": []})"),
                          Catch::Matchers::ContainsSubstring("entries"));
        CHECK_THROWS_WITH(parse_state_json(R"({"dim": 2, "entries": []})"),
                          Catch::Matchers::ContainsSubstring("kind"));
        CHECK_THROWS_AS(parse_state_json(R"({"kind": "spooky", "dim": 1, "entries": [[1, 0]]})"),
                        ParseError);
    }
    SECTION("round trip reproduces the state exactly") {
        const DensityMatrix rho = random_density(4, 33);
        const auto back = std::get<DensityMatrix>(parse_state_json(to_state_json(rho)));
        CHECK(back.matrix().max_abs_diff(rho.matrix()) <= 1e-12);
        const PureState psi = random_pure(5, 44);
        const auto back_psi = std::get<PureState>(parse_state_json(to_state_json(psi)));
        CHECK(back_psi.amplitudes() == psi.amplitudes());
    }
}

TEST_CASE("pure state coercion", "[cli]") {
    SECTION("rank-1 density recovers its ray") {
        const PureState psi = random_pure(4, 55);
        const PureState recovered = as_pure(State(projector(psi)));
        CHECK(std::abs(inner_product(psi, recovered)) == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("mixed states are rejected") {
        CHECK_THROWS_AS(as_pure(State(werner_state(0.7))), NotPureError);
    }
}

TEST_CASE("grid parsing", "[cli]") {
    SECTION("default grids") {
        CHECK(default_q_grid().size() == 19);
        CHECK(default_f_grid().size() == 16);
        CHECK(default_q_grid().front() == Catch::Approx(0.05));
        CHECK(default_q_grid().back() == Catch::Approx(0.95));
        CHECK(default_f_grid().back() == 1.0);
    }
    SECTION("single point grid") {
        const auto g = parse_grid("0.5:0.5:0.1", "--q-grid");
        REQUIRE(g.size() == 1);
        CHECK(g[0] == 0.5);
    }
    SECTION("malformed grids") {
        CHECK_THROWS_AS(parse_grid("0.1:0.5", "--q-grid"), ParseError);
        CHECK_THROWS_AS(parse_grid("0.1:0.5:0", "--q-grid"), ParseError);
        CHECK_THROWS_AS(parse_grid("0.5:0.1:0.1", "--q-grid"), ParseError);
        CHECK_THROWS_AS(parse_grid("a:b:c", "--q-grid"), ParseError);
    }
    SECTION("range validation names the offending value") {
        CHECK_THROWS_WITH(require_q_values(parse_grid("0.5:1.0:0.25", "--q-grid"), "--q-grid"),
                          Catch::Matchers::ContainsSubstring("1"));
        CHECK_THROWS_WITH(require_f_values(parse_grid("0.1:0.3:0.1", "--f-grid"), "--f-grid"),
                          Catch::Matchers::ContainsSubstring("0.1"));
        CHECK_NOTHROW(require_q_values(default_q_grid(), "--q-grid"));
        CHECK_NOTHROW(require_f_values(default_f_grid(), "--f-grid"));
    }
}

TEST_CASE("measure command", "[cli]") {
    SECTION("werner q-divergence") {
        MeasureRequest request{"werner:F=0.7", "bell:psi-", "q-divergence", 0.5, "json"};
        const std::string doc = run_measure(request);
        CHECK(doc ==
              "{\"measure\":\"q-divergence\",\"value\":0.326679946932,"
              "\"state\":\"werner:F=0.7\",\"reference\":\"bell:psi-\",\"q\":0.5}\n");
        CHECK(run_measure(request) == doc);  // deterministic
    }
    SECTION("fidelity of a state with itself") {
        const std::string doc =
            run_measure({"bell:psi-", "bell:psi-", "fidelity", std::nullopt, "json"});
        CHECK(doc.find("\"value\":1,") != std::string::npos);
    }
    SECTION("KL against a pure reference prints inf") {
        const std::string doc =
            run_measure({"werner:F=0.7", "bell:psi-", "kl-divergence", std::nullopt, "json"});
        CHECK(doc.find("\"value\":\"inf\"") != std::string::npos);
    }
    SECTION("csv format") {
        const std::string doc =
            run_measure({"random:d=4,seed=1", "bell:psi-", "fidelity", std::nullopt, "csv"});
        CHECK(doc.find("measure,value,state,reference,q\n") == 0);
        CHECK(doc.find("\"random:d=4,seed=1\"") != std::string::npos);
    }
    SECTION("missing q") {
        CHECK_THROWS_AS(run_measure({"werner:F=0.7", "bell:psi-", "q-divergence", std::nullopt}),
                        PreconditionError);
    }
    SECTION("unknown measure") {
        CHECK_THROWS_AS(run_measure({"bell:psi-", "bell:psi-", "trace-distance", std::nullopt}),
                        ParseError);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(
            run_measure({"maximally-mixed:d=2", "bell:psi-", "fidelity", std::nullopt}),
            DimensionMismatchError);
    }
}

TEST_CASE("sweep command", "[cli]") {
    SECTION("single point at F = 1") {
        SweepRequest request;
        request.f_values = {1.0};
        request.q_values = {0.5};
        const std::string doc = run_sweep(request);
        CHECK(doc == "F,q,K_q,K_q_closed,fidelity,bures_sq\n1,0.5,0,0,1,0\n");
    }
    SECTION("single point at F = 1/4") {
        SweepRequest request;
        request.f_values = {0.25};
        request.q_values = {0.5};
        const auto rows = split(run_sweep(request), '\n');
        const auto cells = split(rows[1], ',');
        CHECK(std::stod(cells[2]) == Catch::Approx(1.0).margin(1e-10));
        CHECK(std::stod(cells[3]) == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("default grid shape, ordering, monotonicity, consistency") {
        const std::string doc = run_sweep(SweepRequest{});
        CHECK(run_sweep(SweepRequest{}) == doc);  // byte-identical reruns
        const auto rows = split(doc, '\n');
        REQUIRE(rows.size() == 1 + 16 * 19);
        CHECK(rows[0] == "F,q,K_q,K_q_closed,fidelity,bures_sq");

        const DensityMatrix reference = projector(bell_state(BellKind::PsiMinus));
        double previous_f = 0.0;
        for (std::size_t i = 1; i < rows.size(); i += 7) {  // spot-check every 7th row
            const auto cells = split(rows[i], ',');
            REQUIRE(cells.size() == 6);
            const double f = std::stod(cells[0]);
            const double q = std::stod(cells[1]);
            const double kq = std::stod(cells[2]);
            const double closed = std::stod(cells[3]);
            CHECK(f >= previous_f);  // F-major ordering
            previous_f = f;
            CHECK(std::abs(kq - closed) <= 1e-10);
            CHECK(std::abs(kq - q_divergence(werner_state(f), reference, EntropicIndex(q))) <=
                  1e-10);
            CHECK(std::stod(cells[4]) == Catch::Approx(f).margin(1e-10));
            CHECK(std::stod(cells[5]) ==
                  Catch::Approx(2.0 - 2.0 * std::sqrt(f)).margin(1e-10));
        }

        // K_q decreases in F at fixed q: compare consecutive F blocks.
        for (std::size_t qi = 0; qi < 19; ++qi) {
            double previous = std::stod(split(rows[1 + qi], ',')[2]);
            for (std::size_t fi = 1; fi < 16; ++fi) {
                const double current = std::stod(split(rows[1 + fi * 19 + qi], ',')[2]);
                CHECK(current <= previous + 1e-12);
                previous = current;
            }
        }
    }
    SECTION("json format carries the same values") {
        SweepRequest request;
        request.f_values = {0.25};
        request.q_values = {0.5};
        request.format = "json";
        const std::string doc = run_sweep(request);
        CHECK(doc.find("\"K_q\":1,") != std::string::npos);
        CHECK(doc.find("\"fidelity\":0.25") != std::string::npos);
    }
    SECTION("grid range errors") {
        SweepRequest request;
        request.f_values = {0.1};
        CHECK_THROWS_AS(run_sweep(request), ParseError);
    }
}

TEST_CASE("report command", "[cli]") {
    SECTION("perfectly purified state") {
        const std::string doc = run_report({"werner:F=1", "bell:psi-", {0.5}});
        CHECK(doc.find("\"fidelity\": 1,") != std::string::npos);
        CHECK(doc.find("\"bures_sq\": 0,") != std::string::npos);
        CHECK(doc.find("{\"q\": 0.5, \"value\": 0}") != std::string::npos);
    }
    SECTION("werner closed-form values per q") {
        const std::string doc = run_report({"werner:F=0.7", "bell:psi-", {0.3, 0.5, 0.7}});
        for (double q : {0.3, 0.5, 0.7}) {
            const double expected = (1.0 - std::pow(0.7, q)) / (1.0 - q);
            const std::string needle =
                "{\"q\": " + format_number(q) + ", \"value\": " + format_number(expected) + "}";
            CHECK(doc.find(needle) != std::string::npos);
        }
        CHECK(run_report({"werner:F=0.7", "bell:psi-", {0.3, 0.5, 0.7}}) == doc);
    }
    SECTION("maximally mixed state is seed independent") {
        for (int seed : {1, 2}) {
            const std::string doc = run_report(
                {"maximally-mixed:d=2", "random-pure:d=2,seed=" + std::to_string(seed), {0.5}});
            CHECK(doc.find("\"value\": 0.585786437627}") != std::string::npos);
        }
    }
    SECTION("mixed reference is rejected") {
        CHECK_THROWS_AS(run_report({"werner:F=0.7", "werner:F=0.7", {0.5}}), NotPureError);
    }
}

TEST_CASE("validate command", "[cli]") {
    CHECK(run_validate("werner:F=0.5") == "{\"kind\":\"density\",\"dim\":4,\"valid\":true}\n");
    CHECK(run_validate("bell:phi+") == "{\"kind\":\"pure\",\"dim\":4,\"valid\":true}\n");
    CHECK_THROWS_AS(run_validate("werner:F=0.1"), ValidationError);
}
