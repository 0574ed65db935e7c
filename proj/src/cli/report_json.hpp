#pragma once

// JSON views of library results, shared by report.cpp and commands.cpp.

#include "rgquad/bethe_solver.hpp"
#include "rgquad/cli.hpp"
#include "rgquad/ed_oracle.hpp"
#include "rgquad/model.hpp"
#include "rgquad/quad_relations.hpp"

namespace rgquad::cli {

Json vector_json(const Eigen::VectorXd& v);
Json integrability_json(const IntegrabilityReport& r);
Json quadratic_system_json(const QuadraticSystem& q);
Json consistency_json(const ConsistencyReport& r);
Json identity_json(const OperatorIdentityReport& r);
Json solutions_json(const SolutionSet& s, const char* method);
Json sum_rules_json(const SumRuleReport& r, double tol);
Json spectrum_json(const SpectrumTable& t);
Json match_json(const MatchReport& m, std::size_t oracle_rows);

}  // namespace rgquad::cli
