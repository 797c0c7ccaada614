#include "rectent/catalog.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rectent/error.hpp"

namespace rectent {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_real(const std::string& s, const std::string& spec) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw CatalogError("bad number '" + s + "' in source '" + spec + "'");
    }
    return v;
}

int parse_int(const std::string& s, const std::string& spec) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw CatalogError("bad integer '" + s + "' in source '" + spec + "'");
    }
    return v;
}

bool starts_with_family(const std::string& s) {
    for (const auto& f : catalog_families()) {
        if (s.rfind(f + ":", 0) == 0) return true;
    }
    return false;
}

}  // namespace

const std::vector<std::string>& catalog_families() {
    static const std::vector<std::string> families = {"circle", "wishart1", "embed",
                                                      "gauss2", "discrete", "product"};
    return families;
}

RectifiableSource source_by_name(const std::string& spec) {
    if (spec.rfind("product:", 0) == 0) {
        const std::string body = spec.substr(8);
        for (std::size_t pos = body.find('x'); pos != std::string::npos; pos = body.find('x', pos + 1)) {
            const std::string left = body.substr(0, pos);
            const std::string right = body.substr(pos + 1);
            if (starts_with_family(left) && starts_with_family(right)) {
                return product_source(source_by_name(left), source_by_name(right));
            }
        }
        throw CatalogError("product source '" + spec + "' must look like product:<a>x<b>");
    }

    const auto parts = split(spec, ':');
    if (parts.empty()) throw CatalogError("empty source string");
    const std::string& family = parts[0];

    if (family == "circle") {
        if (parts.size() == 2 && parts[1] == "uniform") return circle_source(uniform_angle(), spec);
        if (parts.size() == 3 && parts[1] == "vonmises") {
            const double kappa = parse_real(parts[2], spec);
            if (!(kappa >= 0.0) || kappa > 500.0) throw CatalogError("vonmises: kappa must lie in [0, 500]");
            return circle_source(von_mises_angle(kappa), spec);
        }
    } else if (family == "wishart1") {
        if (parts.size() == 3 && parts[1] == "normal") {
            const int m = parse_int(parts[2], spec);
            if (m < 1 || m > 3) throw CatalogError("wishart1: m must be 1, 2 or 3");
            return symmetrized_pushforward(standard_normal(m), m, spec, rank_one_normal_entropy(m));
        }
    } else if (family == "embed") {
        if (parts.size() == 4 && parts[1] == "normal") {
            const int m = parse_int(parts[2], spec);
            const int ambient = parse_int(parts[3], spec);
            if (m < 1 || m > 3 || ambient < m || ambient > 16) {
                throw CatalogError("embed: need 1 <= m <= 3 and m <= M <= 16");
            }
            const ParamDensity base = standard_normal(m);
            return pushforward_source(base, embedding_chart(m, ambient), spec, base.entropy);
        }
    } else if (family == "gauss2") {
        if (parts.size() == 2) {
            const double rho = parse_real(parts[1], spec);
            if (!(std::abs(rho) < 1.0)) throw CatalogError("gauss2: need |rho| < 1");
            const ParamDensity base = correlated_normal(rho);
            return pushforward_source(base, embedding_chart(2, 2), spec, base.entropy);
        }
    } else if (family == "discrete") {
        if (parts.size() == 2) {
            std::vector<double> p;
            std::vector<Vector> points;
            for (const auto& item : split(parts[1], ',')) {
                p.push_back(parse_real(item, spec));
                points.push_back(Vector::Constant(1, static_cast<double>(points.size())));
            }
            try {
                return discrete_source(std::move(points), std::move(p), spec);
            } catch (const InvalidArgument& e) {
                throw CatalogError(std::string(e.what()) + " in source '" + spec + "'");
            }
        }
    }
    throw CatalogError("unknown source '" + spec + "'");
}

}  // namespace rectent
