#include <catch2/catch_amalgamated.hpp>

#include <nefield/orchestrator.hpp>

#include <filesystem>
#include <fstream>

using namespace nefield;
using namespace nefield::orch;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / fs::path("nefield-test-" + std::to_string(::getpid()) + "-" +
                                                    std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

SweepJob small_job(const TempDir& dir, u64 segment = 1000) {
    SweepJob job;
    job.ell = 3;
    job.lo = 2;
    job.hi = 6000;
    job.segment_length = segment;
    job.workers = 2;
    job.output_path = dir.file("out.tsv");
    job.checkpoint_path = dir.file("ckpt");
    job.certificate_path = dir.file("certs");
    return job;
}

} // namespace

TEST_CASE("parse_count") {
    CHECK(parse_count("1000") == 1000);
    CHECK(parse_count("1e9") == 1000000000ull);
    CHECK(parse_count("6e13") == 60000000000000ull);
    CHECK(parse_count("2.5e3") == 2500);
    CHECK_THROWS_AS(parse_count("2.5e0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_count("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_count("1e30"), std::out_of_range);
}

TEST_CASE("run_sweep emits ordered TSV with witness and survivor rows") {
    TempDir dir;
    const SweepJob job = small_job(dir);
    const SweepReport report = run_sweep(job);

    CHECK(report.summary.conductor_count ==
          report.summary.witness_count + report.summary.survivors.size());
    CHECK(report.summary.conductor_count == conductor_stream(3, 2, 6000).size());

    const std::string out = slurp(job.output_path);
    CHECK(out.find("3\t7\t2\t3\t\tsurvivor-size\n") != std::string::npos);
    CHECK(out.find("3\t103\t2\t3\t\tsurvivor-size\n") != std::string::npos);
    CHECK(out.find("\twitness\n") != std::string::npos);
    CHECK(out.find("# summary ell=3 lo=2 hi=6000") != std::string::npos);

    SECTION("rows are ordered by conductor") {
        std::istringstream is(out);
        std::string line;
        u64 last_f = 0;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            const std::size_t t1 = line.find('\t');
            const std::size_t t2 = line.find('\t', t1 + 1);
            const u64 f = std::stoull(line.substr(t1 + 1, t2 - t1 - 1));
            REQUIRE(f > last_f);
            last_f = f;
        }
    }

    SECTION("certificates verify") {
        const VerifyReport vr = run_verify(job.certificate_path);
        CHECK(vr.total == report.summary.witness_count);
        CHECK(vr.valid == vr.total);
        CHECK(vr.failures.empty());
    }
}

TEST_CASE("output bytes are identical across worker counts and segmentations") {
    TempDir dir;
    SweepJob a = small_job(dir, 1000);
    a.workers = 1;
    a.output_path = dir.file("a.tsv");
    a.checkpoint_path = dir.file("a.ckpt");
    a.certificate_path = dir.file("a.certs");
    run_sweep(a);

    SweepJob b = small_job(dir, 1000);
    b.workers = 4;
    b.output_path = dir.file("b.tsv");
    b.checkpoint_path = dir.file("b.ckpt");
    b.certificate_path = dir.file("b.certs");
    run_sweep(b);

    CHECK(slurp(a.output_path) == slurp(b.output_path));
    CHECK(slurp(a.certificate_path) == slurp(b.certificate_path));
}

TEST_CASE("resume from a truncated checkpoint is byte-identical") {
    TempDir dir;
    const SweepJob job = small_job(dir, 500);
    run_sweep(job);
    const std::string full_out = slurp(job.output_path);
    const std::string full_certs = slurp(job.certificate_path);
    const std::string ckpt = slurp(job.checkpoint_path);

    // Simulate an interruption after the third completed segment: keep the
    // header plus three SEG lines and truncate both outputs to the offsets
    // recorded there.
    std::istringstream is(ckpt);
    std::string header, line;
    std::getline(is, header);
    std::vector<std::string> seg_lines;
    while (std::getline(is, line))
        if (!line.empty()) seg_lines.push_back(line);
    REQUIRE(seg_lines.size() >= 5);

    u64 out_offset = 0, cert_offset = 0;
    {
        std::ofstream os(job.checkpoint_path, std::ios::trunc);
        os << header << "\n";
        for (int i = 0; i < 3; ++i) os << seg_lines[i] << "\n";
    }
    // pull offsets out of the third line
    const std::string& third = seg_lines[2];
    const auto grab = [&third](const std::string& key) {
        const std::size_t at = third.find(key + "=");
        REQUIRE(at != std::string::npos);
        return std::stoull(third.substr(at + key.size() + 1));
    };
    out_offset = grab("offset");
    cert_offset = grab("certoffset");
    fs::resize_file(job.output_path, out_offset);
    fs::resize_file(job.certificate_path, cert_offset);

    const SweepReport resumed = run_sweep(job);
    CHECK(resumed.segments_resumed == 3);
    CHECK(slurp(job.output_path) == full_out);
    CHECK(slurp(job.certificate_path) == full_certs);
    CHECK(slurp(job.checkpoint_path) == ckpt);
}

TEST_CASE("checkpoint identity mismatch is rejected") {
    TempDir dir;
    SweepJob job = small_job(dir);
    run_sweep(job);
    job.r_cap = 99991; // changes the job identity hash
    CHECK_THROWS_AS(run_sweep(job), std::runtime_error);
}

TEST_CASE("run_verify") {
    TempDir dir;
    SECTION("empty file: zero certificates, all valid") {
        const std::string path = dir.file("empty");
        std::ofstream(path).close();
        const VerifyReport r = run_verify(path);
        CHECK(r.total == 0);
        CHECK(r.failures.empty());
    }
    SECTION("hand-corrupted value flips to invalid") {
        const std::string path = dir.file("certs");
        std::ofstream os(path);
        os << "CERT ell=3 f=151 a=65 b=86 fa=5^1,13^1 fb=2^1,43^1 prov=witness\n";
        os << "CERT ell=3 f=151 a=66 b=85 fa=2^1,3^1,11^1 fb=5^1,17^1 prov=witness\n";
        os.close();
        const VerifyReport r = run_verify(path);
        CHECK(r.total == 2);
        CHECK(r.valid == 1);
        REQUIRE(r.failures.size() == 1);
        CHECK(r.failures[0].first == 2);
    }
    SECTION("unparseable line counts as a failure") {
        const std::string path = dir.file("bad");
        std::ofstream os(path);
        os << "CERT ell=3 nope\n";
        os.close();
        const VerifyReport r = run_verify(path);
        CHECK(r.total == 1);
        CHECK(r.valid == 0);
    }
}
