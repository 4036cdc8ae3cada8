#include "voipstat/ingest/sip.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string_view>

#include "voipstat/error.hpp"

namespace voipstat::ingest {

namespace {

constexpr std::string_view kSipVersion = "SIP/2.0";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '!' ||
           c == '%' || c == '*' || c == '_' || c == '+' || c == '`' || c == '\'' || c == '~';
  });
}

std::string_view first_line(std::string_view text) {
  const auto eol = text.find('\n');
  return trim(eol == std::string_view::npos ? text : text.substr(0, eol));
}

std::string_view as_text(ByteView payload) {
  return {reinterpret_cast<const char*>(payload.data()), payload.size()};
}

bool parse_uint(std::string_view s, std::uint32_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string tag_param(std::string_view value) {
  // ";tag=" may appear in any case.
  std::string lower(value);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto at = lower.find(";tag=");
  if (at == std::string::npos) return {};
  std::string_view rest = value.substr(at + 5);
  const auto end = rest.find_first_of(";, >\t");
  return std::string(trim(rest.substr(0, end)));
}

void parse_sdp(std::string_view body, SipMessage& msg) {
  while (!body.empty()) {
    const auto eol = body.find('\n');
    std::string_view line = trim(body.substr(0, eol));
    body = eol == std::string_view::npos ? std::string_view{} : body.substr(eol + 1);
    if (line.starts_with("m=audio ")) {
      std::string_view rest = line.substr(8);
      std::uint32_t port = 0;
      if (parse_uint(rest.substr(0, rest.find(' ')), port) && port <= 0xffff) {
        msg.media_port = static_cast<std::uint16_t>(port);
      }
    } else if (line.starts_with("c=IN IP4 ") || line.starts_with("c=IN IP6 ")) {
      std::string_view addr = trim(line.substr(9));
      msg.media_addr = std::string(addr.substr(0, addr.find('/')));
    }
  }
}

}  // namespace

bool looks_like_sip(ByteView payload) noexcept {
  const std::string_view line = first_line(as_text(payload.first(std::min<std::size_t>(payload.size(), 512))));
  if (line.starts_with("SIP/2.0 ")) return true;
  const auto sp = line.find(' ');
  return sp != std::string_view::npos && is_token(line.substr(0, sp)) && line.ends_with(kSipVersion);
}

SipMessage parse_sip(ByteView payload, double capture_ts) {
  const std::string_view text = as_text(payload);
  const std::string_view start = first_line(text);
  SipMessage msg;
  msg.capture_ts = capture_ts;

  if (start.starts_with("SIP/2.0 ")) {
    msg.kind = SipKind::Response;
    std::string_view rest = start.substr(8);
    std::uint32_t code = 0;
    if (!parse_uint(rest.substr(0, rest.find(' ')), code) || code < 100 || code > 699) {
      throw Error(ErrorCode::NotSip, "bad status line");
    }
    msg.status = static_cast<int>(code);
  } else {
    const auto sp1 = start.find(' ');
    const auto sp2 = start.rfind(' ');
    if (sp1 == std::string_view::npos || sp2 == sp1 || start.substr(sp2 + 1) != kSipVersion ||
        !is_token(start.substr(0, sp1))) {
      throw Error(ErrorCode::NotSip, "not a SIP start line");
    }
    msg.kind = SipKind::Request;
    msg.method = std::string(start.substr(0, sp1));
  }

  // Headers end at the first empty line; the body follows.
  const auto first_eol = text.find('\n');
  std::string_view rest = first_eol == std::string_view::npos ? std::string_view{} : text.substr(first_eol + 1);
  bool have_call_id = false;
  bool have_cseq = false;
  while (!rest.empty()) {
    const auto eol = rest.find('\n');
    const std::string_view raw = rest.substr(0, eol);
    rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
    const std::string_view line = trim(raw);
    if (line.empty()) break;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const std::string_view name = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));
    if (iequals(name, "Call-ID") || iequals(name, "i")) {
      msg.call_id = std::string(value);
      have_call_id = !value.empty();
    } else if (iequals(name, "CSeq")) {
      const auto sp = value.find(' ');
      std::uint32_t n = 0;
      if (sp != std::string_view::npos && parse_uint(value.substr(0, sp), n)) {
        msg.cseq = n;
        msg.cseq_method = std::string(trim(value.substr(sp + 1)));
        have_cseq = true;
      }
    } else if (iequals(name, "From") || iequals(name, "f")) {
      msg.from_tag = tag_param(value);
    } else if (iequals(name, "To") || iequals(name, "t")) {
      msg.to_tag = tag_param(value);
    }
  }
  if (!have_call_id) throw Error(ErrorCode::MissingHeader, "Call-ID");
  if (!have_cseq) throw Error(ErrorCode::MissingHeader, "CSeq");
  parse_sdp(rest, msg);
  return msg;
}

}  // namespace voipstat::ingest
