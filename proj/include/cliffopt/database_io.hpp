#pragma once

#include <boost/crc.hpp>

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "database.hpp"

namespace cliffopt {

class DatabaseFileError : public std::runtime_error {
public:
    enum class Kind { Io, Corrupt, Version, Mismatch };

    DatabaseFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// CRC-64/XZ (ECMA-182 polynomial, reflected, inverted).
using Crc64 = boost::crc_optimal<64, 0x42F0E1EBA9EA3693ull, ~0ull, ~0ull, true, true>;

struct DatabaseHeader {
    std::uint8_t n = 0;
    EquivMode mode = EquivMode::Exact;
    Metric metric = Metric::GateCount;
    GateSet gates;
    WeightTable weights{};
    std::uint32_t layer_count = 0;

    bool linear() const { return gates.is_linear(); }

    CostModel model() const {
        switch (metric) {
            case Metric::GateCount: return CostModel::gate_count(gates);
            case Metric::Depth: return CostModel::depth(gates);
            case Metric::Weighted: return CostModel::weighted(gates, weights);
        }
        throw DatabaseFileError(DatabaseFileError::Kind::Corrupt, "unknown metric id");
    }
};

namespace detail {

inline constexpr char kDbMagic[] = "CLDB";
inline constexpr char kDbVersion = '1';
inline constexpr std::size_t kHeaderBytes = 5 + 1 + 1 + 1 + 2 + 4 * kNumGateKinds + 4;
inline constexpr std::size_t kLayerCountOffset = kHeaderBytes - 4;
inline constexpr std::uint32_t kNoWeight = 0xFFFFFFFFu;

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

inline std::uint64_t get_le(const std::uint8_t* p, std::size_t bytes) {
    std::uint64_t v = 0;
    for (std::size_t i = bytes; i-- > 0;) {
        v = (v << 8) | p[i];
    }
    return v;
}

inline std::vector<std::uint8_t> encode_header(const DatabaseHeader& h) {
    std::vector<std::uint8_t> out(kDbMagic, kDbMagic + 4);
    out.push_back(static_cast<std::uint8_t>(kDbVersion));
    out.push_back(h.n);
    out.push_back(static_cast<std::uint8_t>(h.mode));
    out.push_back(static_cast<std::uint8_t>(h.metric));
    put_le(out, h.gates.mask(), 2);
    for (const auto& w : h.weights) {
        put_le(out, w ? *w : kNoWeight, 4);
    }
    put_le(out, h.layer_count, 4);
    return out;
}

inline DatabaseHeader decode_header(const std::uint8_t* p, std::size_t size) {
    using K = DatabaseFileError::Kind;
    if (size < kHeaderBytes + 8) {
        throw DatabaseFileError(K::Corrupt, "database file is truncated");
    }
    if (std::memcmp(p, kDbMagic, 4) != 0) {
        throw DatabaseFileError(K::Corrupt, "not a database file (bad magic)");
    }
    if (p[4] != static_cast<std::uint8_t>(kDbVersion)) {
        throw DatabaseFileError(K::Version, std::string("unsupported database version '") + char(p[4]) + "'");
    }
    DatabaseHeader h;
    h.n = p[5];
    if (p[6] > 2 || p[7] > 2) {
        throw DatabaseFileError(K::Corrupt, "bad mode or metric id");
    }
    h.mode = static_cast<EquivMode>(p[6]);
    h.metric = static_cast<Metric>(p[7]);
    h.gates = GateSet::from_mask(static_cast<std::uint16_t>(get_le(p + 8, 2)));
    for (std::size_t i = 0; i < kNumGateKinds; ++i) {
        const auto w = static_cast<std::uint32_t>(get_le(p + 10 + 4 * i, 4));
        if (w != kNoWeight) {
            h.weights[i] = w;
        }
    }
    h.layer_count = static_cast<std::uint32_t>(get_le(p + kLayerCountOffset, 4));
    return h;
}

template <typename Domain>
DatabaseHeader header_of(const LayerDatabase<Domain>& db) {
    DatabaseHeader h;
    h.n = static_cast<std::uint8_t>(db.num_qubits());
    h.mode = db.mode();
    h.metric = db.model().metric();
    h.gates = db.model().gates();
    h.weights = db.model().weights();
    return h;
}

}  // namespace detail

/// Writes a database file layer by layer, so a build never needs every
/// layer in memory at once. finish() fills in the layer count and checksum.
class DatabaseWriter {
public:
    DatabaseWriter(const std::string& path, const DatabaseHeader& header) : path_(path) {
        out_.open(path, std::ios::binary | std::ios::trunc | std::ios::in | std::ios::out);
        if (!out_) {
            throw DatabaseFileError(DatabaseFileError::Kind::Io, "cannot open " + path + " for writing");
        }
        const auto bytes = detail::encode_header(header);
        write(bytes.data(), bytes.size());
    }

    void write_layer(const Layer& layer) {
        if (finished_) {
            throw std::logic_error("database writer already finished");
        }
        if (layer.released()) {
            throw std::logic_error("cannot write a released layer");
        }
        std::vector<std::uint8_t> count;
        detail::put_le(count, layer.size(), 8);
        write(count.data(), count.size());
        write(layer.raw().data(), layer.raw().size());
        ++layers_;
    }

    void finish() {
        if (finished_) {
            return;
        }
        std::vector<std::uint8_t> count;
        detail::put_le(count, layers_, 4);
        out_.seekp(static_cast<std::streamoff>(detail::kLayerCountOffset));
        write(count.data(), count.size());
        out_.flush();
        // Checksum the finished payload by reading it back.
        out_.seekg(0);
        Crc64 crc;
        std::vector<char> buf(1 << 20);
        while (out_.read(buf.data(), static_cast<std::streamsize>(buf.size())) || out_.gcount() > 0) {
            crc.process_bytes(buf.data(), static_cast<std::size_t>(out_.gcount()));
        }
        out_.clear();
        out_.seekp(0, std::ios::end);
        std::vector<std::uint8_t> tail;
        detail::put_le(tail, crc.checksum(), 8);
        write(tail.data(), tail.size());
        out_.close();
        if (out_.fail()) {
            throw DatabaseFileError(DatabaseFileError::Kind::Io, "error writing " + path_);
        }
        finished_ = true;
    }

    std::uint32_t layers_written() const { return layers_; }

private:
    void write(const std::uint8_t* p, std::size_t size) {
        out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(size));
        if (!out_) {
            throw DatabaseFileError(DatabaseFileError::Kind::Io, "error writing " + path_);
        }
    }

    std::string path_;
    std::fstream out_;
    std::uint32_t layers_ = 0;
    bool finished_ = false;
};

template <typename Domain>
void save_database(const LayerDatabase<Domain>& db, const std::string& path) {
    DatabaseWriter w(path, detail::header_of(db));
    for (const auto& layer : db.layers()) {
        w.write_layer(layer);
    }
    w.finish();
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatabaseFileError(DatabaseFileError::Kind::Io, "cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline DatabaseHeader read_database_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatabaseFileError(DatabaseFileError::Kind::Io, "cannot open " + path);
    }
    std::array<std::uint8_t, detail::kHeaderBytes + 8> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    return detail::decode_header(buf.data(), static_cast<std::size_t>(in.gcount()));
}

template <typename Domain>
LayerDatabase<Domain> parse_database(const std::vector<std::uint8_t>& bytes) {
    using K = DatabaseFileError::Kind;
    const DatabaseHeader h = detail::decode_header(bytes.data(), bytes.size());
    const std::size_t payload = bytes.size() - 8;
    Crc64 crc;
    crc.process_bytes(bytes.data(), payload);
    if (crc.checksum() != detail::get_le(bytes.data() + payload, 8)) {
        throw DatabaseFileError(K::Corrupt, "database checksum mismatch");
    }
    if (h.linear() != !Domain::paired) {
        throw DatabaseFileError(K::Mismatch, h.linear() ? "database holds linear reversible classes"
                                                        : "database holds Clifford classes");
    }
    LayerDatabase<Domain> db(h.n, h.mode, h.model());
    const std::size_t width = db.key_bytes();
    std::size_t pos = detail::kHeaderBytes;
    for (std::uint32_t i = 0; i < h.layer_count; ++i) {
        if (pos + 8 > payload) {
            throw DatabaseFileError(K::Corrupt, "database layer table is truncated");
        }
        const std::uint64_t count = detail::get_le(bytes.data() + pos, 8);
        pos += 8;
        if (count > (payload - pos) / width) {
            throw DatabaseFileError(K::Corrupt, "database layer is truncated");
        }
        std::vector<std::uint8_t> raw(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + count * width));
        pos += count * width;
        try {
            db.add_layer(Layer(i, width, std::move(raw)));
        } catch (const std::invalid_argument& e) {
            throw DatabaseFileError(K::Corrupt, e.what());
        }
    }
    if (pos != payload) {
        throw DatabaseFileError(K::Corrupt, "trailing bytes after the last layer");
    }
    return db;
}

template <typename Domain>
LayerDatabase<Domain> load_database(const std::string& path) {
    return parse_database<Domain>(read_file_bytes(path));
}

using AnyDatabase = std::variant<LayerDatabase<CliffordDomain>, LayerDatabase<LinearDomain>>;

/// Loads either kind of database, chosen by the gate set in the header.
inline AnyDatabase load_any_database(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    const auto h = detail::decode_header(bytes.data(), bytes.size());
    if (h.linear()) {
        return parse_database<LinearDomain>(bytes);
    }
    return parse_database<CliffordDomain>(bytes);
}

}  // namespace cliffopt
