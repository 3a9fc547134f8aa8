#include "mulrk/tableau.hpp"

#include "mulrk/errors.hpp"

#include <cmath>

namespace mulrk {

void MButcherTableau::check_shape() const {
    const std::size_t s = stages();
    if (s == 0) {
        throw ShapeError("tableau has no stages");
    }
    if (nodes.size() != s || exponents.size() != s) {
        throw ShapeError("tableau nodes/exponents/weights disagree on the stage count");
    }
    for (std::size_t i = 0; i < s; ++i) {
        if (exponents[i].size() != i) {
            throw ShapeError("exponent row " + std::to_string(i) + " must have " + std::to_string(i) +
                             " entries");
        }
    }
}

namespace {

void require(std::vector<Violation>& out, std::string condition, double residual, bool inherited = false) {
    if (!(std::abs(residual) <= order_condition_tolerance)) {
        out.push_back({std::move(condition), residual, inherited});
    }
}

double row_sum(const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s += v;
    return s;
}

} // namespace

std::vector<Violation> validate_order2(const MButcherTableau& t) {
    t.check_shape();
    if (t.stages() != 2) {
        throw ShapeError("validate_order2 needs a 2-stage tableau");
    }
    const double a = t.weights[0];
    const double b = t.weights[1];
    const double p = t.nodes[1];
    const double q = t.exponents[1][0];

    std::vector<Violation> out;
    require(out, "node0: first node is 0", t.nodes[0]);
    require(out, "weights: a+b=1", a + b - 1.0);
    require(out, "node: b*p=1/2", b * p - 0.5);
    require(out, "exponent: b*q=1/2", b * q - 0.5);
    return out;
}

std::vector<Violation> validate_order4(const MButcherTableau& t) {
    t.check_shape();
    if (t.stages() != 4) {
        throw ShapeError("validate_order4 needs a 4-stage tableau");
    }
    const auto& c = t.nodes;
    const auto& A = t.exponents;
    const auto& b = t.weights;

    std::vector<Violation> out;
    require(out, "node0: first node is 0", c[0]);
    require(out, "row sum: p=q", c[1] - row_sum(A[1]));
    require(out, "row sum: p1=q1+q2", c[2] - row_sum(A[2]));
    require(out, "row sum: p2=q3+q4+q5", c[3] - row_sum(A[3]));

    double sum_b = 0.0, sum_bc = 0.0, sum_bc2 = 0.0, sum_bc3 = 0.0;
    double sum_bac = 0.0, sum_bcac = 0.0, sum_bac2 = 0.0, sum_baac = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        sum_b += b[i];
        sum_bc += b[i] * c[i];
        sum_bc2 += b[i] * c[i] * c[i];
        sum_bc3 += b[i] * c[i] * c[i] * c[i];
        double ac = 0.0, ac2 = 0.0, aac = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            ac += A[i][j] * c[j];
            ac2 += A[i][j] * c[j] * c[j];
            double inner = 0.0;
            for (std::size_t k = 0; k < j; ++k) inner += A[j][k] * c[k];
            aac += A[i][j] * inner;
        }
        sum_bac += b[i] * ac;
        sum_bcac += b[i] * c[i] * ac;
        sum_bac2 += b[i] * ac2;
        sum_baac += b[i] * aac;
    }
    require(out, "weights: a+b+c+d=1", sum_b - 1.0);
    require(out, "weights: b*p+c*p1+d*p2=1/2", sum_bc - 0.5);
    require(out, "weights: b*p^2+c*p1^2+d*p2^2=1/3", sum_bc2 - 1.0 / 3.0);

    require(out, "inherited: sum b_i c_i^3=1/4", sum_bc3 - 0.25, true);
    require(out, "inherited: sum b_i a_ij c_j=1/6", sum_bac - 1.0 / 6.0, true);
    require(out, "inherited: sum b_i c_i a_ij c_j=1/8", sum_bcac - 0.125, true);
    require(out, "inherited: sum b_i a_ij c_j^2=1/12", sum_bac2 - 1.0 / 12.0, true);
    require(out, "inherited: sum b_i a_ij a_jk c_k=1/24", sum_baac - 1.0 / 24.0, true);
    return out;
}

MButcherTableau classical_mrk4() {
    return MButcherTableau{
        .nodes = {0.0, 0.5, 0.5, 1.0},
        .exponents = {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
        .weights = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
    };
}

MButcherTableau make_order2(double b) {
    if (b == 0.0 || !std::isfinite(b)) {
        throw DomainError("make_order2: b must be finite and nonzero");
    }
    const double p = 1.0 / (2.0 * b);
    return MButcherTableau{
        .nodes = {0.0, p},
        .exponents = {{}, {p}},
        .weights = {1.0 - b, b},
    };
}

nlohmann::json to_json(const MButcherTableau& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 1; i < t.exponents.size(); ++i) {
        rows.push_back(t.exponents[i]);
    }
    return {{"nodes", t.nodes}, {"exponents", rows}, {"weights", t.weights}};
}

MButcherTableau tableau_from_json(const nlohmann::json& j) {
    MButcherTableau t;
    try {
        t.nodes = j.at("nodes").get<std::vector<double>>();
        t.weights = j.at("weights").get<std::vector<double>>();
        t.exponents = j.at("exponents").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(std::string("malformed tableau JSON: ") + e.what());
    }
    // The leading empty row may be omitted.
    if (t.exponents.size() + 1 == t.weights.size()) {
        t.exponents.insert(t.exponents.begin(), std::vector<double>{});
    }
    t.check_shape();
    return t;
}

} // namespace mulrk
