#pragma once

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twhm/param_vector.hpp"
#include "twhm/snapshot_series.hpp"

namespace twhm {

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Snapshot files: header "# twhm-snapshots v1 p=<int> n=<int>", then one
// "<t> <i> <j>" row per present edge (0-based, i < j, t in [0, n]). Lines
// beginning with '#' are ignored. The writer emits rows sorted by (t, i, j),
// so write-then-read reproduces a written file byte for byte.
// ---------------------------------------------------------------------------

inline void write_snapshots(std::ostream& os, const SnapshotSeries& series) {
    os << "# twhm-snapshots v1 p=" << series.p() << " n=" << series.n() << "\n";
    for (int t = 0; t < series.size(); ++t)
        for (const auto& [i, j] : series.frame(t).edges())
            os << t << " " << i << " " << j << "\n";
}

inline SnapshotSeries read_snapshots(std::istream& is) {
    std::string line;
    // Header must be the first line.
    if (!std::getline(is, line)) throw IoError("snapshot file: empty input");
    int p = -1, n = -1;
    {
        std::istringstream head(line);
        std::string hash, name, version, ptok, ntok;
        head >> hash >> name >> version >> ptok >> ntok;
        if (hash != "#" || name != "twhm-snapshots" || version != "v1" ||
            ptok.rfind("p=", 0) != 0 || ntok.rfind("n=", 0) != 0)
            throw IoError("snapshot file: malformed header: " + line);
        try {
            p = std::stoi(ptok.substr(2));
            n = std::stoi(ntok.substr(2));
        } catch (const std::exception&) {
            throw IoError("snapshot file: malformed header: " + line);
        }
    }
    if (p < 2 || n < 0) throw IoError("snapshot file: invalid p or n in header");

    std::vector<Snapshot> frames(static_cast<std::size_t>(n) + 1, Snapshot(p));
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        std::istringstream row(line);
        long long t, i, j;
        if (!(row >> t >> i >> j))
            throw IoError("snapshot file: bad row at line " + std::to_string(lineno));
        if (t < 0 || t > n)
            throw IoError("snapshot file: snapshot index out of range at line " +
                          std::to_string(lineno));
        if (i < 0 || j < 0 || i >= p || j >= p || i >= j)
            throw IoError("snapshot file: bad edge (need 0 <= i < j < p) at line " +
                          std::to_string(lineno));
        Snapshot& frame = frames[static_cast<std::size_t>(t)];
        if (frame.edge(static_cast<int>(i), static_cast<int>(j)))
            throw IoError("snapshot file: duplicate edge at line " + std::to_string(lineno));
        frame.set_edge(static_cast<int>(i), static_cast<int>(j), true);
    }
    return SnapshotSeries(std::move(frames));
}

inline void write_snapshots_file(const std::string& path, const SnapshotSeries& series) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_snapshots(os, series);
    if (!os) throw IoError("write failed: " + path);
}

inline SnapshotSeries read_snapshots_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    return read_snapshots(is);
}

// ---------------------------------------------------------------------------
// Model files: a JSON document with full-precision (shortest round-trip)
// parameter arrays, so reloading reproduces every value to the last bit.
// ---------------------------------------------------------------------------

struct ModelMeta {
    std::uint64_t seed = 0;
    std::string method;
    double grad_norm = 0.0;
    double loss = 0.0;
    std::string timestamp;
};

struct ModelDocument {
    ParamVector theta;
    ModelMeta meta;
};

/// ISO-8601 UTC timestamp; honors SOURCE_DATE_EPOCH for reproducible output.
inline std::string utc_timestamp() {
    std::time_t t;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    } else {
        t = std::time(nullptr);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_model(std::ostream& os, const ModelDocument& doc) {
    nlohmann::json j;
    j["format"] = "twhm-model v1";
    j["p"] = doc.theta.p();
    j["beta0"] = std::vector<double>(doc.theta.beta0.data(),
                                     doc.theta.beta0.data() + doc.theta.p());
    j["beta1"] = std::vector<double>(doc.theta.beta1.data(),
                                     doc.theta.beta1.data() + doc.theta.p());
    j["meta"] = {{"seed", doc.meta.seed},
                 {"method", doc.meta.method},
                 {"grad_norm", doc.meta.grad_norm},
                 {"loss", doc.meta.loss},
                 {"timestamp", doc.meta.timestamp}};
    os << j.dump(2) << "\n";
}

inline ModelDocument read_model(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("model file: invalid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "twhm-model v1")
            throw IoError("model file: unknown format tag");
        const int p = j.at("p").get<int>();
        const auto b0 = j.at("beta0").get<std::vector<double>>();
        const auto b1 = j.at("beta1").get<std::vector<double>>();
        if (static_cast<int>(b0.size()) != p || static_cast<int>(b1.size()) != p)
            throw IoError("model file: parameter arrays do not match p");
        ModelDocument doc;
        doc.theta = ParamVector(Eigen::Map<const Eigen::VectorXd>(b0.data(), p),
                                Eigen::Map<const Eigen::VectorXd>(b1.data(), p));
        if (j.contains("meta")) {
            const auto& m = j.at("meta");
            doc.meta.seed = m.value("seed", std::uint64_t{0});
            doc.meta.method = m.value("method", std::string{});
            doc.meta.grad_norm = m.value("grad_norm", 0.0);
            doc.meta.loss = m.value("loss", 0.0);
            doc.meta.timestamp = m.value("timestamp", std::string{});
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("model file: ") + e.what());
    }
}

inline void write_model_file(const std::string& path, const ModelDocument& doc) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_model(os, doc);
    if (!os) throw IoError("write failed: " + path);
}

inline ModelDocument read_model_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    return read_model(is);
}

} // namespace twhm
