#pragma once

// Layer manifest text format, one layer per line:
//   kind k C_in C_out H_out W_out stride resident_flag
// kind is conv | dense | lstm_gate, resident_flag is 0 or 1. Text after '#'
// is a comment; blank lines are ignored.

#include <charconv>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hydrate/io/binary.hpp"
#include "hydrate/nnpe/model.hpp"

namespace hydrate::nnpe {

inline LayerManifest parse_manifest(std::string_view text) {
  LayerManifest m;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const std::size_t line_start = pos;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::pair<std::string_view, std::size_t>> tokens;  // token, offset in line
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      if (i > start) tokens.emplace_back(line.substr(start, i - start), start);
    }
    if (tokens.empty()) continue;
    const auto where = [&](std::size_t tok) { return static_cast<std::uint64_t>(line_start + tokens[tok].second); };
    if (tokens.size() != 8) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected 8 fields, got " +
                            std::to_string(tokens.size()),
                        line_start);
    }

    Layer l;
    const auto kind = tokens[0].first;
    if (kind == "conv") {
      l.kind = LayerKind::conv;
    } else if (kind == "dense") {
      l.kind = LayerKind::dense;
    } else if (kind == "lstm_gate") {
      l.kind = LayerKind::lstm_gate;
    } else {
      throw FormatError("manifest line " + std::to_string(line_no) + ": unknown layer kind '" + std::string(kind) + "'",
                        where(0));
    }
    std::size_t* fields[] = {&l.k, &l.c_in, &l.c_out, &l.h_out, &l.w_out, &l.stride};
    for (std::size_t f = 0; f < 6; ++f) {
      const auto tok = tokens[f + 1].first;
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size() || v == 0) {
        throw FormatError("manifest line " + std::to_string(line_no) + ": field " + std::to_string(f + 2) +
                              " must be a positive integer, got '" + std::string(tok) + "'",
                          where(f + 1));
      }
      *fields[f] = v;
    }
    const auto flag = tokens[7].first;
    if (flag != "0" && flag != "1") {
      throw FormatError("manifest line " + std::to_string(line_no) + ": resident flag must be 0 or 1", where(7));
    }
    l.resident = flag == "1";
    m.push_back(l);
  }
  return m;
}

inline std::string format_manifest(const LayerManifest& m, std::string_view header = {}) {
  std::ostringstream os;
  if (!header.empty()) os << header;
  os << "# kind k C_in C_out H_out W_out stride resident\n";
  for (const auto& l : m) {
    os << to_string(l.kind) << ' ' << l.k << ' ' << l.c_in << ' ' << l.c_out << ' ' << l.h_out << ' ' << l.w_out
       << ' ' << l.stride << ' ' << (l.resident ? 1 : 0) << '\n';
  }
  return os.str();
}

inline LayerManifest load_manifest(const std::string& path) {
  const auto bytes = io::read_file(path);
  return parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

/// ResNet-50 (bottleneck v1.5, 224x224 input, no classifier head) feeding a
/// single-layer LSTM with all four gates fused into one lstm_gate line.
/// Each bottleneck block's output is flagged resident because the next
/// block adds it back through its shortcut.
inline LayerManifest resnet50_lstm_manifest(std::size_t lstm_hidden = 512) {
  LayerManifest m;
  auto conv = [&](std::size_t k, std::size_t cin, std::size_t cout, std::size_t hw, std::size_t stride, bool res) {
    m.push_back(Layer{LayerKind::conv, k, cin, cout, hw, hw, stride, res});
  };
  conv(7, 3, 64, 112, 2, true);  // stem; its pooled output feeds the first block's shortcut

  const std::size_t blocks[] = {3, 4, 6, 3};
  const std::size_t widths[] = {64, 128, 256, 512};
  const std::size_t maps[] = {56, 28, 14, 7};
  std::size_t c_in = 64;
  for (std::size_t s = 0; s < 4; ++s) {
    const std::size_t w = widths[s];
    const std::size_t hw = maps[s];
    for (std::size_t b = 0; b < blocks[s]; ++b) {
      const std::size_t stride = (b == 0 && s > 0) ? 2 : 1;
      const std::size_t in_hw = hw * stride;
      conv(1, c_in, w, in_hw, 1, false);
      conv(3, w, w, hw, stride, false);
      if (b == 0) conv(1, c_in, 4 * w, hw, stride, false);  // projection shortcut
      conv(1, w, 4 * w, hw, 1, true);
      c_in = 4 * w;
    }
  }
  // Global average pool -> 2048 features -> LSTM step.
  m.push_back(Layer{LayerKind::lstm_gate, 1, 2048 + lstm_hidden, 4 * lstm_hidden, 1, 1, 1, false});
  return m;
}

}  // namespace hydrate::nnpe
