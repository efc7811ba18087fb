#pragma once

#include <string>
#include <vector>

#include "spectradiag/feasibility.hpp"
#include "spectradiag/lambda_sets.hpp"
#include "spectradiag/scalar.hpp"
#include "spectradiag/sequences.hpp"
#include "spectradiag/spectrum.hpp"
#include "spectradiag/transforms.hpp"

namespace spectradiag {

// Wire format, shared by files on disk and CLI output.
//
// Sequence:  {"bounds":["0","1"],
//             "atoms":[{"value":"1/2","count":4}],
//             "infinite_atoms":["0","1"],
//             "tails":[{"limit":"0","coeff":"1","ratio":"1/4"}]}
// Spectrum:  {"pairs":[{"eigenvalue":"0","multiplicity":"inf"},
//                      {"eigenvalue":"1/2","multiplicity":2}]}
// Verdict:   {"feasible":true,"branch":"TWO_INFINITE_SUMMABLE","k0":-1,
//             "slacks":[["fullmaj1:r=1","0"]]}
// Report:    {"eta":"0","entries":[{"k":1,"mu":["2/3","1/3"],"case":"CASE3",
//             "a":"3/5","b":"2/5","Na":1,"Nb":1}]}
// Transform: {"sequence":{...},"receipt":{"moved_mass":"1/24",
//             "touched_indices":"...","changes":[{"label":...,"threshold":...,
//             "before":...,"after":...}]}}
//
// All rational values travel as canonical strings ("p/q" or "p"); divergent
// sums as the string "DIVERGENT"; counts and k as JSON integers. Optional
// fields (k0, failed_condition, a, b, Na, Nb) are omitted when absent.

// Parsers. Each throws errc::parse_error with a field-path diagnostic for
// anything malformed (bad JSON, wrong type, missing key, unparseable
// rational); semantic validation errors from the value constructors
// propagate unchanged. They never crash on hostile input.
DiagonalSequence sequence_from_json(const std::string& text);
SpectrumSpec spectrum_from_json(const std::string& text);

// Bare JSON array of rational strings, e.g. ["2/3","1/3"].
std::vector<Scalar> lambda_from_json(const std::string& text);

// Serializers. Output bytes are deterministic: fixed key order, canonical
// rational strings, two-space indentation, trailing newline. Every emitted
// document re-parses (where a parser exists) into an equal value.
std::string to_json(const DiagonalSequence& seq);
std::string to_json(const SpectrumSpec& spec);
std::string to_json(const FeasibilityVerdict& verdict);
std::string to_json(const MinimalElementReport& report);
std::string to_json(const TransformResult& result);

}  // namespace spectradiag
