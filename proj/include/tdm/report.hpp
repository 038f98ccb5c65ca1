#pragma once
// Byte-stable report documents: "key: value" lines in deterministic order
// under a versioned "format: 1" header. Timing never goes into the report
// body (stdout must be reproducible for golden comparisons).

#include <sstream>
#include <string>

#include "tdm/base.hpp"

namespace tdm {

inline const char* pass_fail(bool ok) { return ok ? "pass" : "fail"; }

class Report {
public:
    explicit Report(const std::string& command, const std::string& input) {
        body_ << "format: 1\n";
        body_ << "command: " << command << "\n";
        body_ << "input: " << input << "\n";
    }

    void line(const std::string& s) { body_ << s << "\n"; }

    template <typename V> void kv(const std::string& key, const V& value) {
        body_ << key << ": " << value << "\n";
    }

    void check(const std::string& name, bool ok,
               const std::string& detail = "") {
        body_ << name << ": " << pass_fail(ok);
        if (!ok && !detail.empty()) body_ << " -- " << detail;
        body_ << "\n";
        failed_ = failed_ || !ok;
    }

    void note_failure() { failed_ = true; }
    bool any_failure() const { return failed_; }

    std::string finish() {
        body_ << "result: " << (failed_ ? "fail" : "pass") << "\n";
        return body_.str();
    }

    std::string finish_error(const std::string& message) {
        body_ << "error: " << message << "\n";
        body_ << "result: error\n";
        return body_.str();
    }

private:
    std::ostringstream body_;
    bool failed_ = false;
};

} // namespace tdm
