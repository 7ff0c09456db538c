#include "corrobench/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include <jpeglib.h>
#include <png.h>

namespace corrobench {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return f;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct DecodedPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> rows;  // tightly packed
};

// mode_rgb: expand palette/gray to RGB, strip alpha, reject 16-bit.
// Otherwise keep single channel samples (palette indices raw) at native depth.
DecodedPng decode_png(const std::filesystem::path& path, bool mode_rgb) {
  FilePtr f = open_file(path, "rb");
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn,
                                           png_warning_fn);
  if (!png) throw IoError("png: cannot allocate reader");
  png_infop info = png_create_info_struct(png);
  DecodedPng out;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("png decode failed for '" + path.string() + "': " + err);
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (mode_rgb) {
    if (depth > 8) {
      err = "images above 8 bits per sample are not supported";
      longjmp(png_jmpbuf(png), 1);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
      png_set_gray_to_rgb(png);
    }
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  } else {
    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_PALETTE) {
      err = "label maps must be single-channel";
      longjmp(png_jmpbuf(png), 1);
    }
    if (depth < 8) png_set_packing(png);
    if (depth == 16) png_set_swap(png);  // little-endian in memory
  }
  png_read_update_info(png, info);
  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out.rows.resize(rowbytes * out.height);
  row_ptrs.resize(out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) row_ptrs[y] = out.rows.data() + y * rowbytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode_png(const std::filesystem::path& path, png_uint_32 width, png_uint_32 height,
                int color_type, int depth, const std::vector<png_bytep>& rows) {
  FilePtr f = open_file(path, "wb");
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn,
                                            png_warning_fn);
  if (!png) throw IoError("png: cannot allocate writer");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png encode failed for '" + path.string() + "': " + err);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  if (depth == 16) png_set_swap(png);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(f.get()) != 0) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
  DecodedPng d = decode_png(path, true);
  if (d.channels != 3) throw IoError("png: unexpected channel layout in '" + path.string() + "'");
  return RasterImage(static_cast<int>(d.width), static_cast<int>(d.height), std::move(d.rows));
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
  std::vector<png_bytep> rows(img.height());
  auto* base = const_cast<std::uint8_t*>(img.data().data());
  for (int y = 0; y < img.height(); ++y) {
    rows[y] = base + static_cast<std::size_t>(y) * img.width() * 3;
  }
  encode_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, rows);
}

LabelMap read_label_png(const std::filesystem::path& path, std::uint16_t ignore_id) {
  DecodedPng d = decode_png(path, false);
  LabelIds ids(d.height, d.width);
  for (png_uint_32 y = 0; y < d.height; ++y) {
    for (png_uint_32 x = 0; x < d.width; ++x) {
      if (d.bit_depth == 16) {
        const std::size_t i = (static_cast<std::size_t>(y) * d.width + x) * 2;
        ids(y, x) = static_cast<std::uint16_t>(d.rows[i] | (d.rows[i + 1] << 8));
      } else {
        ids(y, x) = d.rows[static_cast<std::size_t>(y) * d.width + x];
      }
    }
  }
  return LabelMap(std::move(ids), ignore_id);
}

void write_label_png(const std::filesystem::path& path, const LabelMap& labels) {
  const bool wide = labels.ids().maxCoeff() > 255;
  const int w = labels.width();
  const int h = labels.height();
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * (wide ? 2 : 1));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const std::uint16_t v = labels.at(x, y);
      if (wide) {
        buf[2 * i] = static_cast<std::uint8_t>(v & 0xff);
        buf[2 * i + 1] = static_cast<std::uint8_t>(v >> 8);
      } else {
        buf[i] = static_cast<std::uint8_t>(v);
      }
    }
  }
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<std::size_t>(y) * w * (wide ? 2 : 1);
  encode_png(path, w, h, PNG_COLOR_TYPE_GRAY, wide ? 16 : 8, rows);
}

namespace {

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const RasterImage& img, int quality) {
  if (quality < 1 || quality > 100) throw ParameterError("jpeg quality must be in 1..100");
  jpeg_compress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  unsigned char* mem = nullptr;
  unsigned long mem_size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(mem);
    throw IoError(std::string("jpeg encode failed: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &mem, &mem_size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(img.width()) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img.data().data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::vector<std::uint8_t> out(mem, mem + mem_size);
  jpeg_destroy_compress(&cinfo);
  std::free(mem);
  return out;
}

RasterImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(std::string("jpeg decode failed: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return RasterImage(w, h, std::move(pixels));
}

RasterImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return decode_jpeg(bytes);
  }
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return read_png(path);
  throw IoError("unsupported image format: '" + path.string() + "'");
}

}  // namespace corrobench
