#include <csetjmp>
#include <cstring>

#include <png.h>

#include "landrisk/image_io.hpp"

namespace landrisk {

namespace {

struct PngWriteState {
    std::vector<std::uint8_t>* out;
};

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
    auto* state = static_cast<PngWriteState*>(png_get_io_ptr(png));
    state->out->insert(state->out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

struct PngReadState {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t length) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->offset + length > state->size)
        png_error(png, "unexpected end of stream");
    std::memcpy(out, state->data + state->offset, length);
    state->offset += length;
}

// capture the message, then take libpng's longjmp path back to setjmp
void png_error_capture(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err && err->empty())
        *err = msg;
    png_longjmp(png, 1);
}

void png_warn_noop(png_structp, png_const_charp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
    if (image.width <= 0 || image.height <= 0 || image.data.size() != image.pixels() * 3)
        throw Error("png encode: malformed image buffer");

    std::string errmsg;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_capture, png_warn_noop);
    if (!png)
        throw Error("png encode: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png encode: allocation failed");
    }

    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(std::size_t(image.height));
    PngWriteState state{&out};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("png encode: " + (errmsg.empty() ? std::string("write failed") : errmsg));
    }

    png_set_write_fn(png, &state, png_write_to_vector, png_flush_noop);

    // fixed settings: identical pixels always produce identical bytes
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, png_uint_32(image.width), png_uint_32(image.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    for (int y = 0; y < image.height; ++y)
        rows[std::size_t(y)] =
            const_cast<png_bytep>(image.data.data() + std::size_t(y) * std::size_t(image.width) * 3);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);

    png_destroy_write_struct(&png, &info);
    return out;
}

RgbImage decode_png(std::span<const std::uint8_t> png_bytes) {
    if (png_bytes.size() < 8 || png_sig_cmp(png_bytes.data(), 0, 8) != 0)
        throw Error("png decode: not a PNG stream");

    std::string errmsg;
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_capture, png_warn_noop);
    if (!png)
        throw Error("png decode: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("png decode: allocation failed");
    }

    PngReadState state{png_bytes.data(), png_bytes.size(), 0};
    RgbImage image;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("png decode: " + (errmsg.empty() ? std::string("corrupt stream") : errmsg));
    }

    png_set_read_fn(png, &state, png_read_from_span);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    if (width == 0 || height == 0 ||
        std::uint64_t(width) * std::uint64_t(height) > (std::uint64_t(1) << 28))
        png_error(png, "unreasonable image dimensions");

    // normalize every variant to 8-bit RGB
    png_set_strip_16(png);
    png_set_packing(png);
    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != std::size_t(width) * 3)
        png_error(png, "unsupported pixel layout");

    image = RgbImage(int(width), int(height));
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[std::size_t(y)] = image.data.data() + std::size_t(y) * std::size_t(width) * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);

    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

std::vector<std::uint8_t> encode_label_image(const LabelMap& labels, const ClassTable& table) {
    RgbImage image(labels.width, labels.height);
    const int n = table.size();
    for (std::size_t i = 0; i < labels.pixels(); ++i) {
        const ClassId id = labels.data[i];
        if (int(id) >= n)
            throw Error("label image: invalid class id " + std::to_string(int(id)));
        const Rgb c = table.color_of(id);
        image.data[i * 3] = c.r;
        image.data[i * 3 + 1] = c.g;
        image.data[i * 3 + 2] = c.b;
    }
    return encode_png(image);
}

LabelMap decode_label_image(std::span<const std::uint8_t> png_bytes, const ClassTable& table) {
    const RgbImage image = decode_png(png_bytes);
    LabelMap labels(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const Rgb c = image.at(x, y);
            const auto id = table.class_for_color(c);
            if (!id)
                throw Error("label image: unknown color (" + std::to_string(c.r) + "," +
                            std::to_string(c.g) + "," + std::to_string(c.b) + ") at pixel (" +
                            std::to_string(x) + "," + std::to_string(y) + ")");
            labels.at(x, y) = *id;
        }
    }
    return labels;
}

}  // namespace landrisk
