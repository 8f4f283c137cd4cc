#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cellbif/oracle.hpp"

using namespace cellbif;

TEST_CASE("finite-difference oracle reproduces the pairing curvature") {
    const struct {
        double p, z, gamma, m_inf, e_a;
    } rows[] = {
        {0.1, 1.25, 0.05, 10.0, 0.35},
        {0.15, 0.8, 0.05, 8.0, 0.5},
        {0.05, 2.0, 0.1, 12.0, 0.1},
    };
    for (const auto& row : rows) {
        CAPTURE(row.p, row.z, row.gamma, row.m_inf, row.e_a);
        PhysParams par;
        par.p = row.p;
        par.z = row.z;
        par.gamma = row.gamma;
        const OracleReport rep =
            oracle_k2(par, DiffusionModel::van_der_waals(row.m_inf, row.e_a));
        CHECK(rep.rel_err <= 1e-5);
        CHECK(rep.order >= 1.8);
        CHECK(rep.order <= 2.2);
        // Richardson value sits between no extrapolation and double the step
        CHECK(std::isfinite(rep.k2_oracle));
        CHECK(std::abs(rep.k2_oracle - rep.k2_fine) <=
              std::abs(rep.k2_fine - rep.k2_mid) + 1e-12);
    }
}

TEST_CASE("oracle refinement ladder moves toward the pipeline value") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.05;
    const OracleReport rep = oracle_k2(par, DiffusionModel::van_der_waals(10.0, 0.35));
    const double ec = std::abs(rep.k2_coarse - rep.k2_pipeline);
    const double em = std::abs(rep.k2_mid - rep.k2_pipeline);
    const double ef = std::abs(rep.k2_fine - rep.k2_pipeline);
    CHECK(em < ec);
    CHECK(ef < em);
}

TEST_CASE("oracle validates its master grid") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.05;
    const DiffusionModel model = DiffusionModel::van_der_waals(10.0, 0.35);
    K2Options opt;
    opt.grid_n = 60; // below the minimum
    CHECK_THROWS_AS(oracle_k2(par, model, opt), config_error);
    opt.grid_n = 66; // not divisible by 4
    CHECK_THROWS_AS(oracle_k2(par, model, opt), config_error);
}

TEST_CASE("oracle is deterministic") {
    PhysParams par;
    par.p = 0.1;
    par.z = 1.25;
    par.gamma = 0.05;
    const DiffusionModel model = DiffusionModel::van_der_waals(10.0, 0.2);
    const OracleReport a = oracle_k2(par, model);
    const OracleReport b = oracle_k2(par, model);
    CHECK(a.k2_oracle == b.k2_oracle);
    CHECK(a.order == b.order);
}
