#include "lexer.hpp"

#include <cctype>
#include <limits>

namespace fairadapt::dsl {
namespace {

/// Offset of the first byte that breaks UTF-8, or npos.
std::size_t invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (n == 0 || i + n > s.size()) return i;
    std::uint32_t cp = n == 1 ? c : n == 2 ? (c & 0x1F) : n == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t k = 1; k < n; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[n] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += n;
  }
  return std::string_view::npos;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file, std::vector<Diagnostic>& diags)
      : s_(text), file_(file), diags_(diags) {}

  std::vector<Token> run() {
    if (auto bad = invalid_utf8(s_); bad != std::string_view::npos) {
      advance_to(bad);
      error("E010", "input is not valid UTF-8", here(1));
      out_.push_back({TokenKind::End, {}, 0, here(0)});
      return std::move(out_);
    }
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
        bump();
      } else if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') bump();
      } else if (ident_start(c)) {
        ident();
      } else if (digit(c) || (c == '-' && i_ + 1 < s_.size() && digit(s_[i_ + 1]))) {
        number();
      } else if (c == '"') {
        string();
      } else {
        punct();
      }
    }
    out_.push_back({TokenKind::End, {}, 0, here(0)});
    return std::move(out_);
  }

 private:
  SourceSpan here(int length) const {
    return {file_, line_, col_, length, i_};
  }

  void bump() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void advance_to(std::size_t target) {
    while (i_ < target) bump();
  }

  void error(const char* code, std::string message, SourceSpan span) {
    diags_.push_back({Severity::Error, code, std::move(message), std::move(span)});
  }

  Token start(TokenKind kind) const { return {kind, {}, 0, here(0)}; }

  void finish(Token t) {
    t.span.length = static_cast<int>(i_ - t.span.offset);
    out_.push_back(std::move(t));
  }

  void ident() {
    Token t = start(TokenKind::Ident);
    while (i_ < s_.size() && ident_char(s_[i_])) bump();
    t.text = std::string(s_.substr(t.span.offset, i_ - t.span.offset));
    finish(std::move(t));
  }

  void number() {
    Token t = start(TokenKind::Int);
    bool negative = s_[i_] == '-';
    if (negative) bump();
    std::size_t digits_at = i_;
    while (i_ < s_.size() && digit(s_[i_])) bump();
    std::string_view digits = s_.substr(digits_at, i_ - digits_at);

    if (!negative && i_ + 1 < s_.size() && s_[i_] == ':' && digit(s_[i_ + 1])) {
      bump();
      std::size_t mm_at = i_;
      while (i_ < s_.size() && digit(s_[i_])) bump();
      std::string_view mm = s_.substr(mm_at, i_ - mm_at);
      t.kind = TokenKind::Time;
      t.text = std::string(s_.substr(t.span.offset, i_ - t.span.offset));
      int h = digits.size() == 2 ? (digits[0] - '0') * 10 + (digits[1] - '0') : 99;
      int m = mm.size() == 2 ? (mm[0] - '0') * 10 + (mm[1] - '0') : 99;
      if (h > 23 || m > 59) {
        auto span = t.span;
        span.length = static_cast<int>(i_ - t.span.offset);
        error("E004", "time literal '" + t.text + "' must be HH:MM within 00:00-23:59", span);
        return;
      }
      t.value = h * 60 + m;
      finish(std::move(t));
      return;
    }

    t.text = std::string(s_.substr(t.span.offset, i_ - t.span.offset));
    std::int64_t v = 0;
    constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
    for (char d : digits) {
      int x = d - '0';
      if (v > (kMax - x) / 10) {
        auto span = t.span;
        span.length = static_cast<int>(i_ - t.span.offset);
        error("E005", "integer literal '" + t.text + "' is out of range", span);
        return;
      }
      v = v * 10 + x;
    }
    t.value = negative ? -v : v;
    if (i_ < s_.size() && ident_char(s_[i_])) {
      while (i_ < s_.size() && ident_char(s_[i_])) bump();
      auto span = t.span;
      span.length = static_cast<int>(i_ - t.span.offset);
      error("E001", "malformed number", span);
      return;
    }
    finish(std::move(t));
  }

  void string() {
    Token t = start(TokenKind::String);
    bump();
    while (true) {
      if (i_ >= s_.size() || s_[i_] == '\n') {
        auto span = t.span;
        span.length = static_cast<int>(i_ - t.span.offset);
        error("E002", "unterminated string", span);
        return;
      }
      char c = s_[i_];
      if (c == '"') {
        bump();
        break;
      }
      if (c == '\\' && i_ + 1 < s_.size()) {
        char e = s_[i_ + 1];
        if (e == '"' || e == '\\') {
          t.text += e;
        } else if (e == 'n') {
          t.text += '\n';
        } else if (e == 't') {
          t.text += '\t';
        } else {
          auto span = here(2);
          error("E001", std::string("unknown escape '\\") + e + "'", span);
          t.text += e;
        }
        bump();
        bump();
        continue;
      }
      t.text += c;
      bump();
    }
    finish(std::move(t));
  }

  void punct() {
    static constexpr std::string_view kTwo[] = {"<=", ">=", "==", "!="};
    static constexpr std::string_view kOne = "{}[](),;=.:<>";
    Token t = start(TokenKind::Punct);
    for (auto two : kTwo) {
      if (s_.substr(i_, 2) == two) {
        t.text = std::string(two);
        bump();
        bump();
        finish(std::move(t));
        return;
      }
    }
    if (kOne.find(s_[i_]) != std::string_view::npos) {
      t.text = std::string(1, s_[i_]);
      bump();
      finish(std::move(t));
      return;
    }
    // one whole UTF-8 sequence so the span stays on a character boundary
    std::size_t n = 1;
    auto c = static_cast<unsigned char>(s_[i_]);
    if (c >= 0xC0) n = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
    auto span = here(static_cast<int>(n));
    error("E001", "unexpected character '" + std::string(s_.substr(i_, n)) + "'", span);
    for (std::size_t k = 0; k < n; ++k) bump();
  }

  std::string_view s_;
  const std::string& file_;
  std::vector<Diagnostic>& diags_;
  std::vector<Token> out_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file,
                       std::vector<Diagnostic>& diagnostics) {
  return Lexer(text, file, diagnostics).run();
}

}  // namespace fairadapt::dsl
