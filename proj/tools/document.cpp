#include "document.hpp"

#include <limits>
#include <sstream>

namespace ellgw::app {

namespace {

std::string rational_text(const Json& pair)
{
    const Rational r = rational_from_json(pair);
    return to_string(r);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') {
            r += '"';
        }
        r += c;
    }
    return r + "\"";
}

std::string integer_text(const Json& j)
{
    return integer_from_json(j).get_str();
}

std::string series_text(const Json& s)
{
    std::string out;
    const auto& c = s.at("coefficients");
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Rational r = rational_from_json(c[i]);
        if (r == 0) {
            continue;
        }
        std::string term = to_string(abs(r));
        if (i > 0) {
            term = (abs(r) == 1 ? std::string() : term + " ") + "q" + (i > 1 ? "^" + std::to_string(i) : "");
        }
        if (out.empty()) {
            out = (r < 0 ? "-" : "") + term;
        } else {
            out += (r < 0 ? " - " : " + ") + term;
        }
    }
    if (out.empty()) {
        out = "0";
    }
    return out + " + O(q^" + std::to_string(s.at("order").get<int>() + 1) + ")";
}

void csv_series(std::ostringstream& os, const std::string& key, const Json& s)
{
    const auto& c = s.at("coefficients");
    for (std::size_t i = 0; i < c.size(); ++i) {
        os << csv_field(key) << ',' << i << ',' << integer_text(c[i][0]) << ',' << integer_text(c[i][1]) << '\n';
    }
}

std::string write_csv(const ResultDocument& doc)
{
    std::ostringstream os;
    const Json& p = doc.payload;
    if (p.contains("checks")) {
        os << "check,status,detail\n";
        for (const auto& c : p.at("checks")) {
            os << csv_field(c.at("name").get<std::string>()) << ',' << (c.at("pass").get<bool>() ? "pass" : "fail") << ','
               << csv_field(c.value("offending", std::string())) << '\n';
        }
        return os.str();
    }
    if (p.contains("potential")) {
        os << "monomial,q_power,numerator,denominator\n";
        for (const auto& [m, s] : p.at("potential").at("terms").items()) {
            csv_series(os, m, s);
        }
        return os.str();
    }
    os << "key,q_power,numerator,denominator\n";
    csv_series(os, "C", p.at("series"));
    if (p.contains("quasimodular")) {
        for (const auto& [m, r] : p.at("quasimodular").at("coefficients").items()) {
            os << csv_field(m) << ",," << integer_text(r[0]) << ',' << integer_text(r[1]) << '\n';
        }
    }
    return os.str();
}

std::string write_text(const ResultDocument& doc)
{
    std::ostringstream os;
    const Json& p = doc.payload;
    os << doc.command.at("name").get<std::string>() << " (ellgw " << doc.version << ")\n";
    for (const auto& [k, v] : doc.truncation.items()) {
        os << "  " << k << " = " << v.dump() << '\n';
    }
    if (p.contains("checks")) {
        for (const auto& c : p.at("checks")) {
            os << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>();
            if (c.contains("offending")) {
                os << "  [" << c.at("offending").get<std::string>() << ']';
            }
            os << '\n';
        }
        os << (p.at("passed").get<bool>() ? "all checks pass" : "some checks fail") << '\n';
    } else if (p.contains("potential")) {
        os << "F_" << p.at("genus").get<int>() << ":\n";
        for (const auto& [m, s] : p.at("potential").at("terms").items()) {
            os << "  " << m << " : " << series_text(s) << '\n';
        }
    } else {
        os << "C = " << series_text(p.at("series")) << '\n';
        if (p.contains("quasimodular")) {
            os << "  =";
            bool first = true;
            for (const auto& [m, r] : p.at("quasimodular").at("coefficients").items()) {
                os << (first ? " " : " + ") << '(' << rational_text(r) << ")*" << m;
                first = false;
            }
            os << '\n';
        }
    }
    if (doc.seconds) {
        os << "time: " << *doc.seconds << " s\n";
    }
    return os.str();
}

} // namespace

Format parse_format(const std::string& name)
{
    if (name == "json") {
        return Format::json;
    }
    if (name == "csv") {
        return Format::csv;
    }
    if (name == "text") {
        return Format::text;
    }
    throw std::invalid_argument("unknown output format '" + name + "'");
}

Json integer_to_json(const Integer& z)
{
    if (z.fits_slong_p()) {
        return Json(static_cast<std::int64_t>(z.get_si()));
    }
    return Json(z.get_str());
}

Integer integer_from_json(const Json& j)
{
    if (j.is_number_integer()) {
        return Integer(j.get<long>());
    }
    if (j.is_string()) {
        return Integer(j.get<std::string>());
    }
    throw std::invalid_argument("expected an integer");
}

Json rational_to_json(const Rational& r)
{
    return Json::array({integer_to_json(r.get_num()), integer_to_json(r.get_den())});
}

Rational rational_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("expected a [numerator, denominator] pair");
    }
    const Integer num = integer_from_json(j[0]);
    const Integer den = integer_from_json(j[1]);
    if (den <= 0) {
        throw std::invalid_argument("denominator must be positive");
    }
    const Rational r = make_rational(num, den);
    if (r.get_den() != den) {
        throw std::invalid_argument("rational pair not in lowest terms");
    }
    return r;
}

Json series_to_json(const QSeries& s)
{
    Json c = Json::array();
    for (const auto& x : s.coefficients()) {
        c.push_back(rational_to_json(x));
    }
    return Json{{"variable", s.variable()}, {"order", s.order()}, {"coefficients", std::move(c)}};
}

QSeries series_from_json(const Json& j)
{
    std::vector<Rational> c;
    for (const auto& x : j.at("coefficients")) {
        c.push_back(rational_from_json(x));
    }
    if (static_cast<int>(c.size()) != j.at("order").get<int>() + 1) {
        throw std::invalid_argument("series order does not match its coefficient count");
    }
    return QSeries(j.at("variable").get<std::string>(), std::move(c));
}

std::string series_to_text(const QSeries& s)
{
    return series_text(series_to_json(s));
}

SuperMonomial parse_monomial(const std::string& text)
{
    SuperMonomial m;
    if (text == "1") {
        return m;
    }
    std::istringstream is(text);
    std::string factor;
    while (std::getline(is, factor, '*')) {
        int alpha = 0;
        int level = 0;
        int power = 1;
        char t = 0;
        char underscore = 0;
        std::istringstream fs(factor);
        fs >> t >> alpha >> underscore >> level;
        if (!fs || t != 't' || underscore != '_') {
            throw std::invalid_argument("malformed monomial '" + text + "'");
        }
        char caret = 0;
        if (fs >> caret) {
            if (caret != '^' || !(fs >> power) || power < 1) {
                throw std::invalid_argument("malformed monomial '" + text + "'");
            }
        }
        for (int i = 0; i < power; ++i) {
            SuperMonomial next;
            if (multiply(m, SuperMonomial::of(tvar(alpha, level)), next) == 0) {
                throw std::invalid_argument("monomial '" + text + "' squares an odd variable");
            }
            m = next;
        }
    }
    if (m.to_string() != text) {
        throw std::invalid_argument("monomial '" + text + "' is not in canonical form");
    }
    return m;
}

Json polynomial_to_json(const DescendantPolynomial& p)
{
    Json terms = Json::object();
    for (const auto& [m, c] : p.terms()) {
        terms[m.to_string()] = series_to_json(c);
    }
    return Json{{"exact_degree", p.exact_degree()},
                {"max_level", p.max_level()},
                {"q_order", p.zero().order()},
                {"terms", std::move(terms)}};
}

DescendantPolynomial polynomial_from_json(const Json& j, int max_level)
{
    if (j.at("max_level").get<int>() != max_level) {
        throw std::invalid_argument("descendant bound mismatch");
    }
    const int q = j.at("q_order").get<int>();
    DescendantPolynomial p({j.at("exact_degree").get<int>(), max_level}, QSeries("q", q, Rational(0)));
    for (const auto& [m, s] : j.at("terms").items()) {
        p.add_term(parse_monomial(m), series_from_json(s));
    }
    return p;
}

Json quasimodular_to_json(const QuasimodularDecomposition& d)
{
    Json c = Json::object();
    for (const auto& [m, r] : d.form.coefficients) {
        c[monomial_name(m)] = rational_to_json(r);
    }
    return Json{{"weight", d.form.weight}, {"surplus", d.surplus}, {"coefficients", std::move(c)}};
}

Json ResultDocument::to_json() const
{
    Json j{{"command", command}, {"version", version}, {"truncation", truncation}, {"payload", payload}};
    if (seconds) {
        j["timing"] = Json{{"seconds", *seconds}};
    }
    return j;
}

ResultDocument ResultDocument::from_json(const Json& j)
{
    ResultDocument d;
    d.command = j.at("command");
    d.version = j.at("version").get<std::string>();
    d.truncation = j.at("truncation");
    d.payload = j.at("payload");
    if (j.contains("timing")) {
        d.seconds = j.at("timing").at("seconds").get<double>();
    }
    return d;
}

std::string serialize(const ResultDocument& doc, Format format)
{
    switch (format) {
    case Format::json:
        return doc.to_json().dump() + "\n";
    case Format::csv:
        return write_csv(doc);
    case Format::text:
        return write_text(doc);
    }
    throw std::logic_error("unreachable format");
}

ResultDocument parse_document(const std::string& json_text)
{
    return ResultDocument::from_json(Json::parse(json_text));
}

} // namespace ellgw::app
