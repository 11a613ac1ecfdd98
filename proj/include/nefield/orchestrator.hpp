#pragma once

/**
 * @file orchestrator.hpp
 * @brief Range sharding, parallel sweep execution, checkpoint/resume, and
 *        bit-exact result emission.
 *
 * A sweep job splits [lo, hi] into fixed-length segments (default 1e9, the
 * unit the production runs used). Workers pull segments from a shared
 * queue; results are buffered per segment and appended to the output file
 * strictly in segment order, so the bytes written are independent of the
 * worker count and of interruption points. The checkpoint records, per
 * completed segment, the cumulative output offsets; resuming truncates the
 * output back to the last recorded offset and continues, which makes a
 * resumed run byte-identical to an uninterrupted one.
 */

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <nefield/bounds.hpp>
#include <nefield/heilbronn.hpp>

namespace nefield::orch {

inline constexpr const char* kEngineVersion = "nefield-1";

struct SweepJob {
    u64 ell = 0;
    u64 lo = 0;
    u64 hi = 0;
    u64 segment_length = kSegmentCap;
    unsigned workers = 1;
    u64 r_cap = criterion::kDefaultRCap;
    std::string output_path;
    std::string checkpoint_path;      // empty: no checkpointing
    std::string certificate_path;     // empty: no certificate emission
};

namespace detail {

inline u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string job_identity(const SweepJob& job) {
    return std::to_string(job.ell) + "|" + std::to_string(job.lo) + "|" + std::to_string(job.hi) + "|" +
           std::to_string(job.segment_length) + "|" + std::to_string(job.r_cap) + "|" + kEngineVersion;
}

struct SegmentResult {
    u64 lo = 0;
    u64 hi = 0;
    u64 conductors = 0;
    u64 witnesses = 0;
    u64 max_r = 0;
    std::vector<criterion::SurvivorRecord> survivors;
    std::string rows;  // TSV rows for this segment, ordered by f
    std::string certs; // certificate lines, ordered by f (may be empty)
};

struct CheckpointEntry {
    u64 lo = 0;
    u64 hi = 0;
    u64 conductors = 0;
    u64 witnesses = 0;
    u64 max_r = 0;
    u64 out_offset = 0;  // output byte length after this segment
    u64 cert_offset = 0; // certificate byte length after this segment
    std::vector<u64> survivors;
};

inline std::string survivor_list(const std::vector<u64>& fs) {
    std::string out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(fs[i]);
    }
    return out.empty() ? "-" : out;
}

inline std::string checkpoint_line(const CheckpointEntry& e) {
    std::ostringstream os;
    os << "SEG " << e.lo << " " << e.hi << " DONE conductors=" << e.conductors << " witnesses=" << e.witnesses
       << " maxr=" << e.max_r << " offset=" << e.out_offset << " certoffset=" << e.cert_offset
       << " survivors=" << survivor_list(e.survivors);
    return os.str();
}

inline std::vector<u64> parse_survivor_list(const std::string& s) {
    std::vector<u64> out;
    if (s == "-" || s.empty()) return out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stoull(item));
    return out;
}

inline u64 field_value(const std::string& token, const std::string& key) {
    if (token.rfind(key + "=", 0) != 0) throw std::runtime_error("checkpoint parse: expected " + key);
    return std::stoull(token.substr(key.size() + 1));
}

inline CheckpointEntry parse_checkpoint_line(const std::string& line) {
    std::istringstream is(line);
    std::string tag, done, tok;
    CheckpointEntry e;
    is >> tag >> e.lo >> e.hi >> done;
    if (tag != "SEG" || done != "DONE") throw std::runtime_error("checkpoint parse: bad segment line");
    is >> tok;
    e.conductors = field_value(tok, "conductors");
    is >> tok;
    e.witnesses = field_value(tok, "witnesses");
    is >> tok;
    e.max_r = field_value(tok, "maxr");
    is >> tok;
    e.out_offset = field_value(tok, "offset");
    is >> tok;
    e.cert_offset = field_value(tok, "certoffset");
    is >> tok;
    if (tok.rfind("survivors=", 0) != 0) throw std::runtime_error("checkpoint parse: expected survivors");
    e.survivors = parse_survivor_list(tok.substr(10));
    return e;
}

/// Atomic file replacement: write to a sibling temp file, then rename.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp);
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string survivor_status(criterion::SurvivorReason reason) {
    return reason == criterion::SurvivorReason::size_bound_exceeded ? "survivor-size" : "survivor-cap";
}

/// Process one segment: run the criterion sweep, verify and serialize.
inline SegmentResult process_segment(const SweepJob& job, u64 seg_lo, u64 seg_hi) {
    SegmentResult res;
    res.lo = seg_lo;
    res.hi = seg_hi;
    std::ostringstream rows;
    std::ostringstream certs;
    // Interleave witness and survivor rows in conductor order.
    std::vector<std::pair<u64, std::string>> pending;
    criterion::SweepSummary summary = criterion::sweep(job.ell, seg_lo, seg_hi, job.r_cap, [&](const criterion::Witness& w) {
        const heilbronn::HeilbronnCertificate cert = heilbronn::witness_decomposition(w);
        if (!heilbronn::verify_certificate(cert))
            throw std::logic_error("run_sweep: internal inconsistency, certificate failed verification");
        std::ostringstream row;
        row << w.ell << '\t' << w.f << '\t' << w.q1 << '\t' << w.q2 << '\t' << w.r << '\t' << "witness\n";
        pending.emplace_back(w.f, row.str());
        if (!job.certificate_path.empty()) certs << heilbronn::to_line(cert) << '\n';
    });
    for (const criterion::SurvivorRecord& s : summary.survivors) {
        std::ostringstream row;
        row << s.ell << '\t' << s.f << '\t' << s.q1 << '\t' << s.q2 << '\t' << '\t' << survivor_status(s.reason)
            << '\n';
        pending.emplace_back(s.f, row.str());
    }
    std::sort(pending.begin(), pending.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [f, row] : pending) rows << row;
    res.conductors = summary.conductor_count;
    res.witnesses = summary.witness_count;
    res.max_r = summary.max_r;
    res.survivors = std::move(summary.survivors);
    res.rows = rows.str();
    res.certs = certs.str();
    return res;
}

} // namespace detail

struct SweepReport {
    criterion::SweepSummary summary;
    u64 segments_total = 0;
    u64 segments_resumed = 0;
};

/// Run (or resume) a sweep job. Emits the TSV `ell f q1 q2 r status` with
/// status in {witness, survivor-size, survivor-cap}, ordered by f, then a
/// survivors section and a deterministic summary footer. Throws
/// std::runtime_error on checkpoint mismatch and std::logic_error if any
/// witness fails independent re-verification.
inline SweepReport run_sweep(const SweepJob& job) {
    if (job.ell == 0 || job.lo < 2 || job.lo > job.hi) throw std::invalid_argument("run_sweep: bad range");
    if (job.segment_length == 0 || job.segment_length > kSegmentCap)
        throw std::invalid_argument("run_sweep: segment length must be in [1, 1e9]");
    if (job.output_path.empty()) throw std::invalid_argument("run_sweep: output path required");

    const auto t0 = std::chrono::steady_clock::now();

    // Segment boundaries.
    std::vector<std::pair<u64, u64>> segments;
    for (u64 a = job.lo; a <= job.hi;) {
        const u64 b = std::min(job.hi, a + job.segment_length - 1);
        segments.emplace_back(a, b);
        if (b == job.hi) break;
        a = b + 1;
    }

    // Load checkpoint if present.
    const std::string identity_line = "CKPT " + std::string(kEngineVersion) + " hash=" +
                                      std::to_string(detail::fnv1a(detail::job_identity(job)));
    std::vector<detail::CheckpointEntry> done;
    if (!job.checkpoint_path.empty() && std::filesystem::exists(job.checkpoint_path)) {
        std::ifstream is(job.checkpoint_path);
        std::string header;
        std::getline(is, header);
        if (header != identity_line) throw std::runtime_error("run_sweep: checkpoint does not match this job");
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            done.push_back(detail::parse_checkpoint_line(line));
        }
    }
    if (done.size() > segments.size()) throw std::runtime_error("run_sweep: checkpoint lists too many segments");
    for (std::size_t i = 0; i < done.size(); ++i) {
        if (done[i].lo != segments[i].first || done[i].hi != segments[i].second)
            throw std::runtime_error("run_sweep: checkpoint segments do not match this job");
    }

    // Truncate outputs to the last checkpointed offsets (drops any footer
    // and any partially written segment).
    const u64 resume_offset = done.empty() ? 0 : done.back().out_offset;
    const u64 resume_cert_offset = done.empty() ? 0 : done.back().cert_offset;
    const bool emit_certs = !job.certificate_path.empty();
    if (!done.empty()) {
        if (!std::filesystem::exists(job.output_path) ||
            std::filesystem::file_size(job.output_path) < resume_offset)
            throw std::runtime_error("run_sweep: output file shorter than checkpoint offset");
        std::filesystem::resize_file(job.output_path, resume_offset);
        if (emit_certs) {
            if (!std::filesystem::exists(job.certificate_path) ||
                std::filesystem::file_size(job.certificate_path) < resume_cert_offset)
                throw std::runtime_error("run_sweep: certificate file shorter than checkpoint offset");
            std::filesystem::resize_file(job.certificate_path, resume_cert_offset);
        }
    } else {
        std::ofstream(job.output_path, std::ios::binary | std::ios::trunc);
        if (emit_certs) std::ofstream(job.certificate_path, std::ios::binary | std::ios::trunc);
    }

    const std::size_t first_pending = done.size();
    const std::size_t total = segments.size();

    // Work queue and in-order emitter.
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, detail::SegmentResult> ready;
    std::size_t next_index = first_pending;
    std::atomic<std::size_t> fetch_index{first_pending};
    std::exception_ptr failure;

    const unsigned workers = std::max(1u, job.workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t index = fetch_index.fetch_add(1);
                if (index >= total) return;
                try {
                    detail::SegmentResult res = detail::process_segment(job, segments[index].first, segments[index].second);
                    std::lock_guard lock(mu);
                    ready.emplace(index, std::move(res));
                    cv.notify_all();
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    cv.notify_all();
                    return;
                }
            }
        });
    }

    std::ofstream out(job.output_path, std::ios::binary | std::ios::app);
    std::ofstream certs_out;
    if (emit_certs) certs_out.open(job.certificate_path, std::ios::binary | std::ios::app);
    u64 out_offset = resume_offset;
    u64 cert_offset = resume_cert_offset;

    std::vector<detail::CheckpointEntry> entries = done;
    for (std::size_t index = first_pending; index < total; ++index) {
        detail::SegmentResult res;
        {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return failure || ready.count(index) > 0; });
            if (failure && ready.count(index) == 0) break;
            res = std::move(ready.at(index));
            ready.erase(index);
        }
        out << res.rows;
        out.flush();
        out_offset += res.rows.size();
        if (emit_certs) {
            certs_out << res.certs;
            certs_out.flush();
            cert_offset += res.certs.size();
        }
        detail::CheckpointEntry e;
        e.lo = res.lo;
        e.hi = res.hi;
        e.conductors = res.conductors;
        e.witnesses = res.witnesses;
        e.max_r = res.max_r;
        e.out_offset = out_offset;
        e.cert_offset = cert_offset;
        for (const criterion::SurvivorRecord& s : res.survivors) e.survivors.push_back(s.f);
        entries.push_back(e);
        if (!job.checkpoint_path.empty()) {
            std::string content = identity_line + "\n";
            for (const detail::CheckpointEntry& entry : entries) content += detail::checkpoint_line(entry) + "\n";
            detail::write_file_atomic(job.checkpoint_path, content);
        }
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // Aggregate and append the deterministic footer.
    SweepReport report;
    report.summary.ell = job.ell;
    report.summary.lo = job.lo;
    report.summary.hi = job.hi;
    report.segments_total = total;
    report.segments_resumed = first_pending;
    std::vector<u64> all_survivors;
    for (const detail::CheckpointEntry& e : entries) {
        report.summary.conductor_count += e.conductors;
        report.summary.witness_count += e.witnesses;
        report.summary.max_r = std::max(report.summary.max_r, e.max_r);
        for (u64 f : e.survivors) {
            all_survivors.push_back(f);
            report.summary.survivors.push_back(criterion::SurvivorRecord{job.ell, f});
        }
    }
    std::ostringstream footer;
    footer << "# survivors ell=" << job.ell << " count=" << all_survivors.size() << ": "
           << detail::survivor_list(all_survivors) << "\n";
    footer << "# summary ell=" << job.ell << " lo=" << job.lo << " hi=" << job.hi
           << " segment=" << job.segment_length << " rcap=" << job.r_cap
           << " conductors=" << report.summary.conductor_count << " witnesses=" << report.summary.witness_count
           << " survivors=" << all_survivors.size() << " max-r=" << report.summary.max_r << "\n";
    out << footer.str();
    out.flush();
    report.summary.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct VerifyReport {
    u64 total = 0;
    u64 valid = 0;
    std::vector<std::pair<std::size_t, std::string>> failures; // line number, reason
};

/// Check every certificate in a file. Blank lines are ignored. The report
/// is printable by the CLI; the process exit status is 0 iff all valid.
inline VerifyReport run_verify(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("run_verify: cannot open " + path);
    VerifyReport report;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        ++report.total;
        try {
            const heilbronn::HeilbronnCertificate cert = heilbronn::parse_certificate_line(line);
            if (heilbronn::verify_certificate(cert)) {
                ++report.valid;
            } else {
                report.failures.emplace_back(line_no, "verification failed");
            }
        } catch (const std::exception& e) {
            report.failures.emplace_back(line_no, e.what());
        }
    }
    return report;
}

/// Parse decimal counts with optional scientific shorthand: "1000", "1e9",
/// "6e13", "2.5e3". Exact; throws on fractional or overflowing values.
inline u64 parse_count(const std::string& text) {
    const std::size_t epos = text.find_first_of("eE");
    if (epos == std::string::npos) {
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("parse_count: bad number '" + text + "'");
        return std::stoull(text);
    }
    std::string mantissa = text.substr(0, epos);
    const std::string exp_str = text.substr(epos + 1);
    if (exp_str.empty() || exp_str.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("parse_count: bad exponent in '" + text + "'");
    int exp10 = std::stoi(exp_str);
    const std::size_t dot = mantissa.find('.');
    if (dot != std::string::npos) {
        const std::string frac = mantissa.substr(dot + 1);
        mantissa = mantissa.substr(0, dot) + frac;
        exp10 -= static_cast<int>(frac.size());
    }
    if (mantissa.empty() || mantissa.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("parse_count: bad mantissa in '" + text + "'");
    if (exp10 < 0) throw std::invalid_argument("parse_count: fractional value '" + text + "'");
    u128 value = 0;
    for (char c : mantissa) {
        value = value * 10 + static_cast<unsigned>(c - '0');
        if (value > ~u64{0}) throw std::out_of_range("parse_count: overflow in '" + text + "'");
    }
    for (int i = 0; i < exp10; ++i) {
        value *= 10;
        if (value > ~u64{0}) throw std::out_of_range("parse_count: overflow in '" + text + "'");
    }
    return static_cast<u64>(value);
}

} // namespace nefield::orch
