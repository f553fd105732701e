#include "gaze/transforms/jpeg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

namespace gaze::transforms {

namespace {

// Annex K reference tables, natural (row-major) order.
constexpr int kLumaQuant[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr int kChromaQuant[64] = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

constexpr int kZigzag[64] = {0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
                             12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
                             35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
                             58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

constexpr std::uint8_t kDcLumaBits[17] = {0, 0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
constexpr std::uint8_t kDcLumaVals[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
constexpr std::uint8_t kDcChromaBits[17] = {0, 0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
constexpr std::uint8_t kDcChromaVals[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

constexpr std::uint8_t kAcLumaBits[17] = {0, 0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d};
constexpr std::uint8_t kAcLumaVals[] = {
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61,
    0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52,
    0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25,
    0x26, 0x27, 0x28, 0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45,
    0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64,
    0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83,
    0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99,
    0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6,
    0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3,
    0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2, 0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8,
    0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa};

constexpr std::uint8_t kAcChromaBits[17] = {0, 0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77};
constexpr std::uint8_t kAcChromaVals[] = {
    0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41, 0x51, 0x07, 0x61,
    0x71, 0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91, 0xa1, 0xb1, 0xc1, 0x09, 0x23, 0x33,
    0x52, 0xf0, 0x15, 0x62, 0x72, 0xd1, 0x0a, 0x16, 0x24, 0x34, 0xe1, 0x25, 0xf1, 0x17, 0x18,
    0x19, 0x1a, 0x26, 0x27, 0x28, 0x29, 0x2a, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44,
    0x45, 0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63,
    0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a,
    0x82, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97,
    0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4,
    0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9, 0xca,
    0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe2, 0xe3, 0xe4, 0xe5, 0xe6, 0xe7,
    0xe8, 0xe9, 0xea, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa};

struct HuffEncTable {
  std::uint16_t code[256];
  std::uint8_t size[256];
};

HuffEncTable build_enc_table(const std::uint8_t bits[17], const std::uint8_t* vals) {
  HuffEncTable t{};
  int code = 0, k = 0;
  for (int len = 1; len <= 16; ++len) {
    for (int i = 0; i < bits[len]; ++i, ++k) {
      t.code[vals[k]] = static_cast<std::uint16_t>(code++);
      t.size[vals[k]] = static_cast<std::uint8_t>(len);
    }
    code <<= 1;
  }
  return t;
}

struct HuffDecTable {
  // mincode/maxcode per length plus the value list, per JPEG spec F.2.2.3.
  int mincode[17];
  int maxcode[17];
  int valptr[17];
  std::vector<std::uint8_t> vals;
};

HuffDecTable build_dec_table(const std::uint8_t bits[17], const std::vector<std::uint8_t>& vals) {
  HuffDecTable t;
  t.vals = vals;
  int code = 0, k = 0;
  for (int len = 1; len <= 16; ++len) {
    t.valptr[len] = k;
    t.mincode[len] = code;
    code += bits[len];
    k += bits[len];
    t.maxcode[len] = bits[len] ? code - 1 : -1;
    code <<= 1;
  }
  return t;
}

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}
  void put(int code, int nbits) {
    acc_ = (acc_ << nbits) | (static_cast<std::uint32_t>(code) & ((1u << nbits) - 1));
    nbits_ += nbits;
    while (nbits_ >= 8) {
      const std::uint8_t b = static_cast<std::uint8_t>((acc_ >> (nbits_ - 8)) & 0xFF);
      out_.push_back(b);
      if (b == 0xFF) out_.push_back(0x00);
      nbits_ -= 8;
    }
  }
  void flush() {
    if (nbits_ > 0) put((1 << (8 - nbits_)) - 1, 8 - nbits_);  // pad with 1s to a byte boundary
  }

 private:
  std::vector<std::uint8_t>& out_;
  std::uint32_t acc_ = 0;
  int nbits_ = 0;
};

int bit_category(int v) {
  int a = std::abs(v), n = 0;
  while (a) {
    a >>= 1;
    ++n;
  }
  return n;
}

const auto& dct_cos_table() {
  static const auto tab = [] {
    std::array<std::array<double, 8>, 8> t{};
    for (int u = 0; u < 8; ++u)
      for (int x = 0; x < 8; ++x) t[u][x] = std::cos((2 * x + 1) * u * M_PI / 16.0);
    return t;
  }();
  return tab;
}

void fdct8x8(const double in[64], double out[64]) {
  // Direct separable DCT-II with orthonormal scaling.
  const auto& cos_tab = dct_cos_table();
  double tmp[64];
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0;
      for (int x = 0; x < 8; ++x) s += in[y * 8 + x] * cos_tab[u][x];
      tmp[y * 8 + u] = s;
    }
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double s = 0;
      for (int y = 0; y < 8; ++y) s += tmp[y * 8 + u] * cos_tab[v][y];
      const double cu = u == 0 ? M_SQRT1_2 : 1.0;
      const double cv = v == 0 ? M_SQRT1_2 : 1.0;
      out[v * 8 + u] = 0.25 * cu * cv * s;
    }
}

void idct8x8(const double in[64], double out[64]) {
  const auto& cos_tab = dct_cos_table();
  double tmp[64];
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0;
      for (int u = 0; u < 8; ++u) {
        const double cu = u == 0 ? M_SQRT1_2 : 1.0;
        s += cu * in[v * 8 + u] * cos_tab[u][x];
      }
      tmp[v * 8 + x] = s;
    }
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      double s = 0;
      for (int v = 0; v < 8; ++v) {
        const double cv = v == 0 ? M_SQRT1_2 : 1.0;
        s += cv * tmp[v * 8 + x] * cos_tab[v][y];
      }
      out[y * 8 + x] = 0.25 * s;
    }
}

void put16(std::vector<std::uint8_t>& out, int v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_marker(std::vector<std::uint8_t>& out, std::uint8_t m) {
  out.push_back(0xFF);
  out.push_back(m);
}

}  // namespace

std::array<int, 64> jpeg_quant_table(int quality, int which) {
  if (quality < 0 || quality > 100) throw std::invalid_argument("jpeg: quality must be in [0,100]");
  if (quality == 0) quality = 1;  // scale 5000/0 is undefined; behave as quality 1
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  const int* base = which == 0 ? kLumaQuant : kChromaQuant;
  std::array<int, 64> t{};
  for (int i = 0; i < 64; ++i) {
    int q = (base[kZigzag[i]] * scale + 50) / 100;
    t[i] = std::clamp(q, 1, 255);
  }
  return t;
}

std::vector<std::uint8_t> jpeg_encode(const core::ColorImage& img, int quality) {
  const auto qluma = jpeg_quant_table(quality, 0);
  const auto qchroma = jpeg_quant_table(quality, 1);

  const int w = img.width, h = img.height;
  const int bw = (w + 7) / 8, bh = (h + 7) / 8;

  std::vector<std::uint8_t> out;
  put_marker(out, 0xD8);  // SOI

  // APP0 / JFIF
  put_marker(out, 0xE0);
  put16(out, 16);
  const char jfif[5] = {'J', 'F', 'I', 'F', 0};
  out.insert(out.end(), jfif, jfif + 5);
  out.push_back(1);
  out.push_back(1);
  out.push_back(0);
  put16(out, 1);
  put16(out, 1);
  out.push_back(0);
  out.push_back(0);

  // DQT
  for (int t = 0; t < 2; ++t) {
    put_marker(out, 0xDB);
    put16(out, 67);
    out.push_back(static_cast<std::uint8_t>(t));
    const auto& q = t == 0 ? qluma : qchroma;
    for (int i = 0; i < 64; ++i) out.push_back(static_cast<std::uint8_t>(q[i]));
  }

  // SOF0: 3 components, no subsampling
  put_marker(out, 0xC0);
  put16(out, 17);
  out.push_back(8);
  put16(out, h);
  put16(out, w);
  out.push_back(3);
  for (int c = 0; c < 3; ++c) {
    out.push_back(static_cast<std::uint8_t>(c + 1));
    out.push_back(0x11);
    out.push_back(c == 0 ? 0 : 1);
  }

  // DHT x4
  const struct {
    std::uint8_t cls_id;
    const std::uint8_t* bits;
    const std::uint8_t* vals;
    int nvals;
  } tables[4] = {
      {0x00, kDcLumaBits, kDcLumaVals, 12},
      {0x10, kAcLumaBits, kAcLumaVals, 162},
      {0x01, kDcChromaBits, kDcChromaVals, 12},
      {0x11, kAcChromaBits, kAcChromaVals, 162},
  };
  for (const auto& t : tables) {
    put_marker(out, 0xC4);
    put16(out, 2 + 1 + 16 + t.nvals);
    out.push_back(t.cls_id);
    for (int i = 1; i <= 16; ++i) out.push_back(t.bits[i]);
    out.insert(out.end(), t.vals, t.vals + t.nvals);
  }

  // SOS
  put_marker(out, 0xDA);
  put16(out, 12);
  out.push_back(3);
  for (int c = 0; c < 3; ++c) {
    out.push_back(static_cast<std::uint8_t>(c + 1));
    out.push_back(c == 0 ? 0x00 : 0x11);
  }
  out.push_back(0);
  out.push_back(63);
  out.push_back(0);

  const HuffEncTable dc_tab[2] = {build_enc_table(kDcLumaBits, kDcLumaVals),
                                  build_enc_table(kDcChromaBits, kDcChromaVals)};
  const HuffEncTable ac_tab[2] = {build_enc_table(kAcLumaBits, kAcLumaVals),
                                  build_enc_table(kAcChromaBits, kAcChromaVals)};

  BitWriter bw_out(out);
  int prev_dc[3] = {0, 0, 0};

  auto encode_block = [&](const double block[64], const std::array<int, 64>& qt, int comp) {
    double coef[64];
    fdct8x8(block, coef);
    int zz[64];
    for (int i = 0; i < 64; ++i)
      zz[i] = static_cast<int>(std::lround(coef[kZigzag[i]] / qt[i]));

    const int ti = comp == 0 ? 0 : 1;
    const int diff = zz[0] - prev_dc[comp];
    prev_dc[comp] = zz[0];
    const int cat = bit_category(diff);
    bw_out.put(dc_tab[ti].code[cat], dc_tab[ti].size[cat]);
    if (cat) bw_out.put(diff < 0 ? diff + (1 << cat) - 1 : diff, cat);

    int run = 0;
    for (int i = 1; i < 64; ++i) {
      if (zz[i] == 0) {
        ++run;
        continue;
      }
      while (run > 15) {
        bw_out.put(ac_tab[ti].code[0xF0], ac_tab[ti].size[0xF0]);
        run -= 16;
      }
      const int acat = bit_category(zz[i]);
      const int sym = (run << 4) | acat;
      bw_out.put(ac_tab[ti].code[sym], ac_tab[ti].size[sym]);
      bw_out.put(zz[i] < 0 ? zz[i] + (1 << acat) - 1 : zz[i], acat);
      run = 0;
    }
    if (run > 0) bw_out.put(ac_tab[ti].code[0x00], ac_tab[ti].size[0x00]);
  };

  // Interleaved MCU scan = one 8x8 block per component at 4:4:4.
  double ablock[3][64];
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      for (int y = 0; y < 8; ++y) {
        const int sy = std::min(by * 8 + y, h - 1);
        for (int x = 0; x < 8; ++x) {
          const int sx = std::min(bx * 8 + x, w - 1);
          const double r = img.at(sx, sy, 0) * 255.0;
          const double g = img.at(sx, sy, 1) * 255.0;
          const double b = img.at(sx, sy, 2) * 255.0;
          ablock[0][y * 8 + x] = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
          ablock[1][y * 8 + x] = -0.168735892 * r - 0.331264108 * g + 0.5 * b;
          ablock[2][y * 8 + x] = 0.5 * r - 0.418687589 * g - 0.081312411 * b;
        }
      }
      encode_block(ablock[0], qluma, 0);
      encode_block(ablock[1], qchroma, 1);
      encode_block(ablock[2], qchroma, 2);
    }
  }
  bw_out.flush();
  put_marker(out, 0xD9);  // EOI
  return out;
}

namespace {

class BitReader {
 public:
  BitReader(const std::uint8_t* p, const std::uint8_t* end) : p_(p), end_(end) {}

  int bit() {
    if (nbits_ == 0) {
      if (p_ >= end_) throw std::runtime_error("jpeg: truncated entropy stream");
      acc_ = *p_++;
      if (acc_ == 0xFF) {
        if (p_ >= end_) throw std::runtime_error("jpeg: truncated entropy stream");
        const std::uint8_t m = *p_++;
        if (m != 0x00) throw std::runtime_error("jpeg: unexpected marker in scan");
      }
      nbits_ = 8;
    }
    --nbits_;
    return (acc_ >> nbits_) & 1;
  }

  int bits(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | bit();
    return v;
  }

  const std::uint8_t* pos() const { return p_; }

 private:
  const std::uint8_t* p_;
  const std::uint8_t* end_;
  std::uint8_t acc_ = 0;
  int nbits_ = 0;
};

int huff_decode(BitReader& br, const HuffDecTable& t) {
  int code = br.bit();
  for (int len = 1; len <= 16; ++len) {
    if (t.maxcode[len] >= 0 && code <= t.maxcode[len])
      return t.vals[t.valptr[len] + code - t.mincode[len]];
    code = (code << 1) | br.bit();
  }
  throw std::runtime_error("jpeg: bad Huffman code");
}

int extend(int v, int cat) { return v < (1 << (cat - 1)) ? v - (1 << cat) + 1 : v; }

struct Component {
  int id = 0;
  int hs = 1, vs = 1;  // sampling factors
  int quant_id = 0;
  int dc_id = 0, ac_id = 0;
  std::vector<double> plane;  // full-size, after upsampling
  int pw = 0, ph = 0;         // plane dims before upsampling
};

}  // namespace

core::ColorImage jpeg_decode(const std::vector<std::uint8_t>& bytes) {
  const std::uint8_t* p = bytes.data();
  const std::uint8_t* end = p + bytes.size();
  auto need = [&](size_t n) {
    if (static_cast<size_t>(end - p) < n) throw std::runtime_error("jpeg: truncated file");
  };
  auto get16 = [&]() {
    need(2);
    const int v = (p[0] << 8) | p[1];
    p += 2;
    return v;
  };

  need(2);
  if (p[0] != 0xFF || p[1] != 0xD8) throw std::runtime_error("jpeg: missing SOI");
  p += 2;

  std::array<std::array<int, 64>, 4> quant{};
  std::array<HuffDecTable, 4> dc_tabs, ac_tabs;
  std::array<bool, 4> dc_set{}, ac_set{};
  std::vector<Component> comps;
  int width = 0, height = 0;

  while (true) {
    need(2);
    if (p[0] != 0xFF) throw std::runtime_error("jpeg: marker expected");
    const std::uint8_t marker = p[1];
    p += 2;
    if (marker == 0xD9) break;  // EOI

    const int seg_len = get16() - 2;
    need(static_cast<size_t>(seg_len));
    const std::uint8_t* seg = p;
    p += seg_len;

    if (marker == 0xDB) {
      int off = 0;
      while (off < seg_len) {
        const int prec = seg[off] >> 4, id = seg[off] & 0x0F;
        ++off;
        for (int i = 0; i < 64; ++i) {
          quant[id][i] = prec ? (seg[off] << 8 | seg[off + 1]) : seg[off];
          off += prec ? 2 : 1;
        }
      }
    } else if (marker == 0xC0 || marker == 0xC1) {
      height = seg[1] << 8 | seg[2];
      width = seg[3] << 8 | seg[4];
      const int nc = seg[5];
      for (int c = 0; c < nc; ++c) {
        Component comp;
        comp.id = seg[6 + c * 3];
        comp.hs = seg[7 + c * 3] >> 4;
        comp.vs = seg[7 + c * 3] & 0x0F;
        comp.quant_id = seg[8 + c * 3];
        comps.push_back(comp);
      }
    } else if (marker == 0xC4) {
      int off = 0;
      while (off < seg_len) {
        const int cls = seg[off] >> 4, id = seg[off] & 0x0F;
        ++off;
        std::uint8_t bits[17] = {};
        int total = 0;
        for (int i = 1; i <= 16; ++i) {
          bits[i] = seg[off + i - 1];
          total += bits[i];
        }
        off += 16;
        std::vector<std::uint8_t> vals(seg + off, seg + off + total);
        off += total;
        if (cls == 0) {
          dc_tabs[id] = build_dec_table(bits, vals);
          dc_set[id] = true;
        } else {
          ac_tabs[id] = build_dec_table(bits, vals);
          ac_set[id] = true;
        }
      }
    } else if (marker == 0xDA) {
      const int ns = seg[0];
      for (int s = 0; s < ns; ++s) {
        const int cid = seg[1 + s * 2];
        for (auto& c : comps)
          if (c.id == cid) {
            c.dc_id = seg[2 + s * 2] >> 4;
            c.ac_id = seg[2 + s * 2] & 0x0F;
          }
      }
      if (comps.empty() || width <= 0 || height <= 0)
        throw std::runtime_error("jpeg: SOS before SOF");

      int hmax = 1, vmax = 1;
      for (const auto& c : comps) {
        hmax = std::max(hmax, c.hs);
        vmax = std::max(vmax, c.vs);
      }
      const int mcux = (width + 8 * hmax - 1) / (8 * hmax);
      const int mcuy = (height + 8 * vmax - 1) / (8 * vmax);
      for (auto& c : comps) {
        c.pw = mcux * 8 * c.hs;
        c.ph = mcuy * 8 * c.vs;
        c.plane.assign(static_cast<size_t>(c.pw) * c.ph, 0.0);
        if (!dc_set[c.dc_id] || !ac_set[c.ac_id])
          throw std::runtime_error("jpeg: missing Huffman table");
      }

      BitReader br(p, end);
      std::vector<int> prev_dc(comps.size(), 0);
      double coef[64], pix[64];
      for (int my = 0; my < mcuy; ++my) {
        for (int mx = 0; mx < mcux; ++mx) {
          for (size_t ci = 0; ci < comps.size(); ++ci) {
            Component& c = comps[ci];
            for (int v = 0; v < c.vs; ++v) {
              for (int hblk = 0; hblk < c.hs; ++hblk) {
                std::fill(coef, coef + 64, 0.0);
                const int cat = huff_decode(br, dc_tabs[c.dc_id]);
                const int diff = cat ? extend(br.bits(cat), cat) : 0;
                prev_dc[ci] += diff;
                coef[0] = static_cast<double>(prev_dc[ci]) * quant[c.quant_id][0];
                for (int k = 1; k < 64;) {
                  const int rs = huff_decode(br, ac_tabs[c.ac_id]);
                  const int run = rs >> 4, sz = rs & 0x0F;
                  if (sz == 0) {
                    if (run != 15) break;  // EOB
                    k += 16;
                    continue;
                  }
                  k += run;
                  if (k > 63) throw std::runtime_error("jpeg: coefficient overrun");
                  coef[kZigzag[k]] = static_cast<double>(extend(br.bits(sz), sz)) *
                                     quant[c.quant_id][k];
                  ++k;
                }
                idct8x8(coef, pix);
                const int ox = (mx * c.hs + hblk) * 8, oy = (my * c.vs + v) * 8;
                for (int y = 0; y < 8; ++y)
                  for (int x = 0; x < 8; ++x)
                    c.plane[static_cast<size_t>(oy + y) * c.pw + ox + x] = pix[y * 8 + x];
              }
            }
          }
        }
      }

      core::ColorImage img(width, height);
      const bool gray = comps.size() == 1;
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          double ycc[3] = {0, 0, 0};
          for (size_t ci = 0; ci < comps.size() && ci < 3; ++ci) {
            const Component& c = comps[ci];
            const int sx = x * c.hs / hmax, sy = y * c.vs / vmax;
            ycc[ci] = c.plane[static_cast<size_t>(sy) * c.pw + sx];
          }
          const double Y = ycc[0] + 128.0;
          double r, g, b;
          if (gray) {
            r = g = b = Y;
          } else {
            r = Y + 1.402 * ycc[2];
            g = Y - 0.344136286 * ycc[1] - 0.714136286 * ycc[2];
            b = Y + 1.772 * ycc[1];
          }
          img.at(x, y, 0) = std::clamp(r, 0.0, 255.0) / 255.0;
          img.at(x, y, 1) = std::clamp(g, 0.0, 255.0) / 255.0;
          img.at(x, y, 2) = std::clamp(b, 0.0, 255.0) / 255.0;
        }
      }
      return img;
    }
    // other segments (APPn, COM, ...) are skipped
  }
  throw std::runtime_error("jpeg: no scan data");
}

core::ColorImage jpeg_round_trip(const core::ColorImage& img, int quality) {
  return jpeg_decode(jpeg_encode(img, quality));
}

void write_jpeg(const core::ColorImage& img, const std::string& path, int quality) {
  const auto bytes = jpeg_encode(img, quality);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

core::ColorImage read_jpeg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return jpeg_decode(bytes);
}

}  // namespace gaze::transforms
