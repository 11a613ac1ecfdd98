/**
 * @file nefield_cli.cpp
 * @brief Command-line front end: sweeps, certificate verification, bound
 *        tables, field norms, and Euclidean-minimum lower bounds.
 */

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include <nefield/cycfield.hpp>
#include <nefield/orchestrator.hpp>

namespace {

using namespace nefield;

int cmd_sweep(const std::string& ell, const std::string& from, const std::string& to, const std::string& segment,
              unsigned workers, const std::string& rcap, const std::string& out, const std::string& checkpoint,
              const std::string& emit_certs) {
    orch::SweepJob job;
    job.ell = orch::parse_count(ell);
    job.lo = orch::parse_count(from);
    job.hi = orch::parse_count(to);
    job.segment_length = orch::parse_count(segment);
    job.workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
    job.r_cap = orch::parse_count(rcap);
    job.output_path = out;
    job.checkpoint_path = checkpoint;
    job.certificate_path = emit_certs;
    const orch::SweepReport report = orch::run_sweep(job);
    std::cerr << "sweep ell=" << job.ell << " [" << job.lo << ", " << job.hi << "]: "
              << report.summary.conductor_count << " conductors, " << report.summary.witness_count
              << " witnesses, " << report.summary.survivors.size() << " survivors, max r "
              << report.summary.max_r << ", " << report.segments_total - report.segments_resumed << "/"
              << report.segments_total << " segments processed in " << report.summary.elapsed_seconds << " s\n";
    return 0;
}

int cmd_verify(const std::string& path) {
    const orch::VerifyReport report = orch::run_verify(path);
    for (const auto& [line_no, reason] : report.failures)
        std::cout << "line " << line_no << "\tinvalid\t" << reason << "\n";
    std::cout << report.valid << "/" << report.total << " certificates valid\n";
    return report.failures.empty() ? 0 : 1;
}

void print_bound(const bounds::BoundResult& res, bool verbose) {
    std::cout << res.ell << "\t" << res.threshold_label() << "\n";
    if (verbose) {
        for (const bounds::BoundCheckpoint& cp : res.checkpoints)
            std::cout << "  # " << cp.quantity << " at f=" << cp.digit << "e" << cp.exp10 << ": rhs <= "
                      << cp.rhs_upper << "\n";
    }
}

int cmd_bounds(const std::string& table, bool grh, bool uncond, const std::string& ell_str, bool verbose) {
    const bounds::BoundsEvaluator ev;
    if (!table.empty()) {
        if (table == "A") {
            std::cout << "ell\tf-bound (GRH)\n";
            for (u64 ell : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97})
                print_bound(ev.grh_bound(ell), verbose);
        } else if (table == "B") {
            std::cout << "ell\tf-bound (unconditional)\n";
            for (u64 ell : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97})
                print_bound(ev.uncond_bound(ell), verbose);
        } else if (table == "C") {
            std::cout << "p0\tC\n";
            for (unsigned e = 6; e <= 52; e += 2) std::cout << "1e" << e << "\t" << ev.constant_C(e) << "\n";
        } else {
            std::cerr << "unknown table '" << table << "' (expected A, B, or C)\n";
            return 2;
        }
        return 0;
    }
    if (grh == uncond) {
        std::cerr << "choose exactly one of --grh/--uncond, or --table\n";
        return 2;
    }
    const u64 ell = orch::parse_count(ell_str);
    print_bound(grh ? ev.grh_bound(ell) : ev.uncond_bound(ell), verbose);
    return 0;
}

int cmd_norm(const std::string& poly, const std::string& elem) {
    const std::vector<cycfield::Int> mp = cycfield::parse_poly(poly);
    const std::size_t deg = cycfield::poly_degree(mp);
    if (mp[deg] != 1) throw std::invalid_argument("norm: defining polynomial must be monic");
    cycfield::certify_irreducible(mp);
    const cycfield::FieldElement e = cycfield::parse_element(elem);
    if (e.coeffs.size() > deg) throw std::invalid_argument("norm: element degree exceeds field degree");
    std::cout << cycfield::norm(mp, e).get_str() << "\n";
    return 0;
}

int cmd_minbound(const std::string& poly, const std::string& alpha, const std::string& beta, const std::string& ell,
                 const std::string& f) {
    const cycfield::NumberFieldSpec spec(orch::parse_count(ell), orch::parse_count(f), cycfield::parse_poly(poly));
    const cycfield::MinimumBound mb =
        cycfield::minimum_lower_bound(spec, cycfield::parse_element(alpha), cycfield::parse_element(beta));
    std::cout << "bound=" << mb.bound.get_str() << " witness-t=" << mb.witness_t.get_str()
              << " equality=" << (mb.equality_attained ? "yes" : "no") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"norm-Euclidean field search toolkit"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "search a conductor range for non-norm-Euclideanity witnesses");
    std::string ell, from, to, segment = "1e9", rcap = "1e6", out, checkpoint, certs;
    unsigned workers = 0;
    sweep->add_option("--ell", ell, "degree (odd prime, 3..97)")->required();
    sweep->add_option("--from", from, "range start")->required();
    sweep->add_option("--to", to, "range end (inclusive)")->required();
    sweep->add_option("--segment", segment, "segment length (default 1e9)");
    sweep->add_option("--workers", workers, "worker threads (default: hardware)");
    sweep->add_option("--rcap", rcap, "prime r search cap (default 1e6)");
    sweep->add_option("--out", out, "output TSV path")->required();
    sweep->add_option("--checkpoint", checkpoint, "checkpoint path (enables resume)");
    sweep->add_option("--emit-certs", certs, "also write decomposition certificates to this path");

    auto* verify = app.add_subcommand("verify", "verify a certificate file");
    std::string cert_path;
    verify->add_option("--certs", cert_path, "certificate file")->required();

    auto* bounds_cmd = app.add_subcommand("bounds", "conductor-bound tables and per-degree bounds");
    std::string table, bell = "0";
    bool grh = false, uncond = false, verbose = false;
    bounds_cmd->add_option("--table", table, "emit a whole table: A (GRH), B (unconditional), C (constants)");
    bounds_cmd->add_flag("--grh", grh, "GRH bound for one degree");
    bounds_cmd->add_flag("--uncond", uncond, "unconditional bound for one degree");
    bounds_cmd->add_option("--ell", bell, "degree for --grh/--uncond");
    bounds_cmd->add_flag("--checkpoints", verbose, "also print certification checkpoints");

    auto* norm_cmd = app.add_subcommand("norm", "field norm of an element");
    std::string poly, elem;
    norm_cmd->add_option("--poly", poly, "defining polynomial, descending integer coefficients")->required();
    norm_cmd->add_option("--elem", elem, "element, descending rational coefficients")->required();

    auto* minbound = app.add_subcommand("minbound", "Euclidean-minimum lower bound for alpha/beta");
    std::string alpha, beta, mell, mf, mpoly;
    minbound->add_option("--poly", mpoly, "defining polynomial, descending integer coefficients")->required();
    minbound->add_option("--alpha", alpha, "alpha, descending rational coefficients")->required();
    minbound->add_option("--beta", beta, "beta, descending rational coefficients")->required();
    minbound->add_option("--ell", mell, "degree")->required();
    minbound->add_option("--f", mf, "conductor")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(ell, from, to, segment, workers, rcap, out, checkpoint, certs);
        if (verify->parsed()) return cmd_verify(cert_path);
        if (bounds_cmd->parsed()) return cmd_bounds(table, grh, uncond, bell, verbose);
        if (norm_cmd->parsed()) return cmd_norm(poly, elem);
        if (minbound->parsed()) return cmd_minbound(mpoly, alpha, beta, mell, mf);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
