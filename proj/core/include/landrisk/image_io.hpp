#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "landrisk/class_table.hpp"
#include "landrisk/types.hpp"

namespace landrisk {

/// PNG codec for 8-bit RGB images. Encoding uses fixed settings (RGB8,
/// filter None, fixed compression level, fixed chunk order) so identical
/// inputs produce identical bytes. Decoding accepts grayscale, palette,
/// 16-bit and alpha variants and normalizes them to RGB8.
std::vector<std::uint8_t> encode_png(const RgbImage& image);
RgbImage decode_png(std::span<const std::uint8_t> png_bytes);

/// Color-coded label rasters: each pixel carries its class display color.
std::vector<std::uint8_t> encode_label_image(const LabelMap& labels, const ClassTable& table);
LabelMap decode_label_image(std::span<const std::uint8_t> png_bytes, const ClassTable& table);

// Raw raster wire format, little-endian:
//   magic "RLM1" (labels) or "RKM1" (risk), u32 width, u32 height,
//   then width*height id bytes, row-major.
inline constexpr std::uint32_t kRawHeaderBytes = 12;
inline constexpr char kLabelMagic[4] = {'R', 'L', 'M', '1'};
inline constexpr char kRiskMagic[4] = {'R', 'K', 'M', '1'};

std::vector<std::uint8_t> encode_raw(const LabelMap& labels);
std::vector<std::uint8_t> encode_raw(const RiskMap& risk);
LabelMap decode_raw_labels(std::span<const std::uint8_t> bytes, const ClassTable& table);
RiskMap decode_raw_risk(std::span<const std::uint8_t> bytes);

/// Pulls consecutive raw label records off a byte stream. Returns false at
/// a clean end of stream; throws on a truncated or malformed record.
class RawLabelStreamReader {
public:
    explicit RawLabelStreamReader(std::istream& in) : in_(in) {}
    bool next(std::vector<std::uint8_t>& record);

private:
    std::istream& in_;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace landrisk
