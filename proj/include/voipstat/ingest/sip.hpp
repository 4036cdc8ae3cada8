#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voipstat/ingest/bytes.hpp"

namespace voipstat::ingest {

enum class SipKind { Request, Response };

/// Header subset of a SIP message: start line, Call-ID, CSeq, From/To tags,
/// plus the audio media endpoint of an SDP body when one is present.
struct SipMessage {
  SipKind kind = SipKind::Request;
  std::string method;  // request method, empty for responses
  int status = 0;      // response code, 0 for requests
  std::string call_id;
  std::uint32_t cseq = 0;
  std::string cseq_method;
  std::string from_tag;
  std::string to_tag;
  std::optional<std::uint16_t> media_port;  // SDP "m=audio <port>"
  std::string media_addr;                   // SDP "c=IN IP4 <addr>"
  double capture_ts = 0.0;

  bool is_request(std::string_view m) const { return kind == SipKind::Request && method == m; }
  bool is_response(int code) const { return kind == SipKind::Response && status == code; }
};

/// Cheap check on the start line: "SIP/2.0 " or "<TOKEN> <uri> SIP/2.0".
bool looks_like_sip(ByteView payload) noexcept;

/// Throws `Error(NotSip)` when the start line is neither a SIP request nor a
/// status line with a code in [100, 699]; `Error(MissingHeader)` without
/// Call-ID or CSeq. Header names match case-insensitively, compact forms
/// included.
SipMessage parse_sip(ByteView payload, double capture_ts);

}  // namespace voipstat::ingest
