// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "curate/core/manifest.hpp"
#include "curate/quality/judge.hpp"
#include "httplib.h"

namespace curate::quality {

struct HttpJudgeOptions {
  std::string url;  // http://host[:port]/path
  int timeout_seconds = 60;
};

/// POSTs the sample record as JSON; the response body is the raw verdict.
/// Connection failures and non-2xx statuses raise judge-unavailable.
inline Judge http_judge(const HttpJudgeOptions& opt) {
  const std::string prefix = "http://";
  if (!text::starts_with(opt.url, prefix))
    throw Error(ErrorCode::invalid_argument, "judge endpoint must start with http://, got '" + opt.url + "'");
  std::string rest = opt.url.substr(prefix.size());
  auto slash = rest.find('/');
  std::string host = rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (host.empty()) throw Error(ErrorCode::invalid_argument, "judge endpoint has no host");
  return [host, path, opt](const Sample& s) {
    httplib::Client cli("http://" + host);
    cli.set_connection_timeout(opt.timeout_seconds, 0);
    cli.set_read_timeout(opt.timeout_seconds, 0);
    auto res = cli.Post(path, dump_record(sample_to_record(s)), "application/json");
    if (!res)
      throw Error(ErrorCode::judge_unavailable, opt.url + ": " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
      throw Error(ErrorCode::judge_unavailable, opt.url + ": HTTP " + std::to_string(res->status));
    return res->body;
  };
}

}  // namespace curate::quality
