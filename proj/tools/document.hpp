#pragma once

// Result documents and their serializations. JSON is canonical: keys are
// sorted, rationals are [numerator, denominator] pairs in lowest terms, and
// integers that do not fit in 64 bits are written as decimal strings.

#include <optional>
#include <string>

#include <json.hpp>

#include "ellgw/potential.hpp"
#include "ellgw/quasimodular.hpp"

namespace ellgw::app {

using Json = nlohmann::json;

enum class Format { json, csv, text };

Format parse_format(const std::string& name);

Json integer_to_json(const Integer& z);
Integer integer_from_json(const Json& j);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json series_to_json(const QSeries& s);
QSeries series_from_json(const Json& j);

/// "1 - 3 q^2 + O(q^5)".
std::string series_to_text(const QSeries& s);

/// Inverse of SuperMonomial::to_string.
SuperMonomial parse_monomial(const std::string& text);

Json polynomial_to_json(const DescendantPolynomial& p);
DescendantPolynomial polynomial_from_json(const Json& j, int max_level);

Json quasimodular_to_json(const QuasimodularDecomposition& d);

struct ResultDocument {
    Json command;     // echo of the job configuration
    std::string version;
    Json truncation;  // name -> integer
    Json payload;
    std::optional<double> seconds;  // present only when timing was requested

    Json to_json() const;
    static ResultDocument from_json(const Json& j);

    friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

std::string serialize(const ResultDocument& doc, Format format);

ResultDocument parse_document(const std::string& json_text);

} // namespace ellgw::app
