// Copyright 2026 The Slitport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal streaming JSON emitter with a fixed number format (17 significant
// digits), so report bytes depend only on the values written. Callers are
// responsible for writing object keys in sorted order.

#ifndef SLITPORT_SRC_JSON_WRITER_HPP
#define SLITPORT_SRC_JSON_WRITER_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slitport::detail {

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view name) {
    separate();
    quoted(name);
    out_ += ": ";
    pending_key_ = true;
  }

  void value(double x) { scalar(format_number(x)); }
  void value(int x) { scalar(std::to_string(x)); }
  void value(std::string_view s) {
    separate();
    quoted(s);
  }
  void value(const char* s) { value(std::string_view(s)); }
  void value(std::complex<double> z) {
    begin_array();
    value(z.real());
    value(z.imag());
    end_array();
  }
  void null() { scalar("null"); }

  template <typename T>
  void value(const std::optional<T>& x) {
    if (x)
      value(*x);
    else
      null();
  }

  const std::string& str() const { return out_; }

 private:
  void open(char c) {
    separate();
    out_ += c;
    first_.push_back(true);
  }
  void close(char c) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ += c;
    if (first_.empty()) out_ += '\n';
  }
  void scalar(const std::string& text) {
    separate();
    out_ += text;
  }
  void separate() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (first_.empty()) return;
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    newline();
  }
  void newline() {
    out_ += '\n';
    out_.append(2 * first_.size(), ' ');
  }
  void quoted(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

}  // namespace slitport::detail

#endif  // SLITPORT_SRC_JSON_WRITER_HPP
