// Copyright 2026 The smallaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smallaug/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include "smallaug/image_io.hpp"

namespace smallaug {

namespace {

// Minimal 5x7 glyphs for axis labels: just the characters the chart needs.
struct Glyph {
  char ch;
  uint8_t rows[7];  // bit 4 = leftmost column
};

constexpr Glyph kGlyphs[] = {
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'a', {0x00, 0x00, 0x0e, 0x01, 0x0f, 0x11, 0x0f}},
    {'e', {0x00, 0x00, 0x0e, 0x11, 0x1f, 0x10, 0x0e}},
    {'g', {0x00, 0x0f, 0x11, 0x11, 0x0f, 0x01, 0x0e}},
    {'i', {0x04, 0x00, 0x0c, 0x04, 0x04, 0x04, 0x0e}},
    {'l', {0x0c, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'m', {0x00, 0x00, 0x1a, 0x15, 0x15, 0x15, 0x15}},
    {'n', {0x00, 0x00, 0x1e, 0x11, 0x11, 0x11, 0x11}},
    {'p', {0x00, 0x00, 0x1e, 0x11, 0x1e, 0x10, 0x10}},
    {'s', {0x00, 0x00, 0x0f, 0x10, 0x0e, 0x01, 0x1e}},
    {'t', {0x08, 0x08, 0x1c, 0x08, 0x08, 0x09, 0x06}},
    {'u', {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0d}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c}},
    {'+', {0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00}},
    {'-', {0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00}},
};

struct Color {
  uint8_t r, g, b;
};

constexpr Color kBlack{30, 30, 30};
constexpr Color kPBar{70, 110, 180};
constexpr Color kMBar{230, 145, 40};

class Canvas {
 public:
  Canvas(uint32_t w, uint32_t h) : width_(w), height_(h), pixels_(size_t(w) * h * 3, 255) {}

  void fill_rect(int x, int y, int w, int h, Color c) {
    for (int yy = std::max(0, y); yy < std::min<int>(height_, y + h); ++yy) {
      for (int xx = std::max(0, x); xx < std::min<int>(width_, x + w); ++xx) {
        uint8_t* px = pixels_.data() + (size_t(yy) * width_ + xx) * 3;
        px[0] = c.r;
        px[1] = c.g;
        px[2] = c.b;
      }
    }
  }

  void text(int x, int y, const std::string& s, Color c) {
    for (const char ch : s) {
      const Glyph* glyph = nullptr;
      for (const Glyph& g : kGlyphs) {
        if (g.ch == ch) {
          glyph = &g;
          break;
        }
      }
      if (glyph != nullptr) {
        for (int row = 0; row < 7; ++row) {
          for (int col = 0; col < 5; ++col) {
            if ((glyph->rows[row] >> (4 - col)) & 1) {
              fill_rect(x + col, y + row, 1, 1, c);
            }
          }
        }
      }
      x += 6;  // 5px glyph + 1px spacing
    }
  }

  void save(const std::string& path) const { write_png(path, width_, height_, pixels_); }

 private:
  uint32_t width_;
  uint32_t height_;
  std::vector<uint8_t> pixels_;
};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

void write_policy_chart(const std::string& path, const std::array<double, 3>& p_sums,
                        const std::array<double, 3>& m_sums) {
  const int width = 520;
  const int height = 340;
  const int left = 56;
  const int right = width - 20;
  const int top = 28;
  const int bottom = height - 36;
  Canvas canvas(width, height);

  double y_max = 1.0;
  for (int i = 0; i < 3; ++i) {
    y_max = std::max({y_max, p_sums[i], m_sums[i]});
  }

  // Axes.
  canvas.fill_rect(left, top, 1, bottom - top + 1, kBlack);
  canvas.fill_rect(left, bottom, right - left, 1, kBlack);

  // Y ticks at 0, 1/2 and max.
  for (const double frac : {0.0, 0.5, 1.0}) {
    const int y = bottom - static_cast<int>(std::lround(frac * (bottom - top)));
    canvas.fill_rect(left - 3, y, 3, 1, kBlack);
    canvas.text(8, y - 3, short_number(frac * y_max), kBlack);
  }

  const char* labels[3] = {"single", "multiple", "all"};
  const int group_width = (right - left) / 3;
  const int bar_width = 42;
  for (int i = 0; i < 3; ++i) {
    const int center = left + group_width * i + group_width / 2;
    const int hp = static_cast<int>(std::lround(p_sums[i] / y_max * (bottom - top)));
    const int hm = static_cast<int>(std::lround(m_sums[i] / y_max * (bottom - top)));
    canvas.fill_rect(center - bar_width - 3, bottom - hp, bar_width, hp, kPBar);
    canvas.fill_rect(center + 3, bottom - hm, bar_width, hm, kMBar);
    canvas.text(center - 3 * static_cast<int>(std::strlen(labels[i])), bottom + 8, labels[i],
                kBlack);
  }

  // Legend.
  canvas.fill_rect(right - 90, 8, 10, 10, kPBar);
  canvas.text(right - 76, 10, "p sum", kBlack);
  canvas.fill_rect(right - 90, 22, 10, 10, kMBar);
  canvas.text(right - 76, 24, "m sum", kBlack);

  canvas.save(path);
}

}  // namespace smallaug
