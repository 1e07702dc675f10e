#include <cstring>
#include <fstream>

#include "landrisk/image_io.hpp"

namespace landrisk {

namespace {

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v & 0xff));
    out.push_back(std::uint8_t((v >> 8) & 0xff));
    out.push_back(std::uint8_t((v >> 16) & 0xff));
    out.push_back(std::uint8_t((v >> 24) & 0xff));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

struct RawHeader {
    std::uint32_t width;
    std::uint32_t height;
};

// caps the per-record allocation a hostile header can demand
constexpr std::uint64_t kMaxRawPixels = std::uint64_t(1) << 28;

RawHeader parse_raw_header(std::span<const std::uint8_t> bytes, const char expected_magic[4],
                           const char* what) {
    if (bytes.size() < kRawHeaderBytes)
        throw Error(std::string(what) + ": truncated header");
    if (std::memcmp(bytes.data(), expected_magic, 4) != 0)
        throw Error(std::string(what) + ": bad magic, expected \"" +
                    std::string(expected_magic, expected_magic + 4) + "\"");
    RawHeader h{get_u32le(bytes.data() + 4), get_u32le(bytes.data() + 8)};
    if (h.width == 0 || h.height == 0)
        throw Error(std::string(what) + ": zero dimension");
    if (std::uint64_t(h.width) * std::uint64_t(h.height) > kMaxRawPixels)
        throw Error(std::string(what) + ": unreasonable dimensions");
    if (bytes.size() - kRawHeaderBytes < std::size_t(h.width) * std::size_t(h.height))
        throw Error(std::string(what) + ": truncated payload, need " +
                    std::to_string(std::uint64_t(h.width) * h.height) + " bytes, have " +
                    std::to_string(bytes.size() - kRawHeaderBytes));
    return h;
}

template <typename Map>
std::vector<std::uint8_t> encode_raw_impl(const Map& map, const char magic[4]) {
    std::vector<std::uint8_t> out;
    out.reserve(kRawHeaderBytes + map.pixels());
    out.insert(out.end(), magic, magic + 4);
    put_u32le(out, std::uint32_t(map.width));
    put_u32le(out, std::uint32_t(map.height));
    out.insert(out.end(), map.data.begin(), map.data.end());
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_raw(const LabelMap& labels) { return encode_raw_impl(labels, kLabelMagic); }

std::vector<std::uint8_t> encode_raw(const RiskMap& risk) { return encode_raw_impl(risk, kRiskMagic); }

LabelMap decode_raw_labels(std::span<const std::uint8_t> bytes, const ClassTable& table) {
    const RawHeader h = parse_raw_header(bytes, kLabelMagic, "raw labels");
    LabelMap labels(int(h.width), int(h.height));
    const std::uint8_t* payload = bytes.data() + kRawHeaderBytes;
    const int n = table.size();
    for (std::size_t i = 0; i < labels.pixels(); ++i) {
        if (int(payload[i]) >= n)
            throw Error("raw labels: invalid class id " + std::to_string(int(payload[i])) +
                        " at pixel (" + std::to_string(i % h.width) + "," + std::to_string(i / h.width) +
                        ")");
        labels.data[i] = payload[i];
    }
    return labels;
}

RiskMap decode_raw_risk(std::span<const std::uint8_t> bytes) {
    const RawHeader h = parse_raw_header(bytes, kRiskMagic, "raw risk");
    RiskMap risk(int(h.width), int(h.height));
    const std::uint8_t* payload = bytes.data() + kRawHeaderBytes;
    for (std::size_t i = 0; i < risk.pixels(); ++i) {
        if (payload[i] >= kRiskLevels)
            throw Error("raw risk: level " + std::to_string(int(payload[i])) + " outside [0,5] at pixel (" +
                        std::to_string(i % h.width) + "," + std::to_string(i / h.width) + ")");
        risk.data[i] = payload[i];
    }
    return risk;
}

bool RawLabelStreamReader::next(std::vector<std::uint8_t>& record) {
    record.resize(kRawHeaderBytes);
    in_.read(reinterpret_cast<char*>(record.data()), kRawHeaderBytes);
    if (in_.gcount() == 0 && in_.eof())
        return false;  // clean end between records
    if (std::size_t(in_.gcount()) != kRawHeaderBytes)
        throw Error("raw stream: truncated header");
    if (std::memcmp(record.data(), kLabelMagic, 4) != 0)
        throw Error("raw stream: bad magic");
    const std::uint32_t w = get_u32le(record.data() + 4);
    const std::uint32_t h = get_u32le(record.data() + 8);
    if (w == 0 || h == 0 || std::uint64_t(w) * std::uint64_t(h) > kMaxRawPixels)
        throw Error("raw stream: bad dimensions " + std::to_string(w) + "x" + std::to_string(h));
    const std::size_t payload = std::size_t(w) * std::size_t(h);
    record.resize(kRawHeaderBytes + payload);
    in_.read(reinterpret_cast<char*>(record.data() + kRawHeaderBytes), std::streamsize(payload));
    if (std::size_t(in_.gcount()) != payload)
        throw Error("raw stream: truncated payload");
    return true;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out)
        throw Error("write failed for " + path);
}

}  // namespace landrisk
