#pragma once

#include <string>

#include "quadloop/continuation.hpp"
#include "quadloop/deformation.hpp"
#include "quadloop/disc.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/harmonic.hpp"
#include "quadloop/loop.hpp"
#include "quadloop/monodromy.hpp"

namespace quadloop {

// Versioned JSON records. Writers emit sorted keys and full-precision
// numbers, so equal inputs give byte-identical output; readers reject
// unknown schema versions and malformed fields with SerializationError.
inline constexpr int kSchemaVersion = 1;

std::string loop_to_json(const Loop& x);
Loop loop_from_json(const std::string& text);

std::string curve_to_json(const LoopCurve& c);
LoopCurve curve_from_json(const std::string& text);

std::string disc_to_json(const AnalyticDisc& d);
AnalyticDisc disc_from_json(const std::string& text);

std::string push_problem_to_json(const PushProblem& p);
PushProblem push_problem_from_json(const std::string& text);
std::string push_report_to_json(const PushReport& r);

std::string certificate_to_json(const HarmonicCertificate& c);
HarmonicCertificate certificate_from_json(const std::string& text);

std::string chain_to_json(const ContinuationChain& chain);
std::string monodromy_to_json(const MonodromyResult& r);

// CSV traces: header row, fixed columns, full-precision scientific notation.
std::string chain_to_csv(const ContinuationChain& chain);
std::string monodromy_trace_csv(const MonodromyResult& r);

}  // namespace quadloop
