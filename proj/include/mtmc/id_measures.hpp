#pragma once

#include "mtmc/assignment.hpp"
#include "mtmc/detail/parallel.hpp"
#include "mtmc/geometry.hpp"
#include "mtmc/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace mtmc {

// Bipartite truth-to-result graph as a square matrix of size
// |truth| + |computed|. Rows are the regular truth nodes followed by one
// false-positive node per computed trajectory; columns are the regular
// computed nodes followed by one false-negative node per truth trajectory.
// Pairings the graph does not allow (a truth with another trajectory's
// irregular node) carry a finite sentinel that can never enter an optimal
// solution, keeping all arithmetic in exact integers.
struct IdGraph {
    CostMatrix<std::int64_t> matrix;
    std::size_t n_truth = 0;
    std::size_t n_computed = 0;
    std::int64_t sentinel = 0;
};

inline IdGraph build_id_graph(const Scenario& s) {
    IdGraph g;
    g.n_truth = s.truth.size();
    g.n_computed = s.computed.size();
    const std::size_t n = g.n_truth + g.n_computed;
    g.sentinel = s.total_truth_length() + s.total_computed_length() + 1;
    g.matrix = CostMatrix<std::int64_t>(n, n, g.sentinel);
    if (n == 0) return g;

    // Regular block. A pair with no time overlap costs len(tau)+len(gamma),
    // which equals sending both to their irregular nodes, so the optimum is
    // unchanged by keeping the entry dense.
    detail::parallel_for(g.n_truth, [&](std::size_t i) {
        const Trajectory& tau = s.truth[i];
        for (std::size_t j = 0; j < g.n_computed; ++j) {
            const Trajectory& gamma = s.computed[j];
            std::int64_t cost;
            if (tau.last_frame() < gamma.first_frame() ||
                gamma.last_frame() < tau.first_frame()) {
                cost = tau.length() + gamma.length();
            } else {
                cost = pair_cost(&tau, &gamma, s.mode).total();
            }
            g.matrix.at(i, j) = cost;
        }
    });

    for (std::size_t i = 0; i < g.n_truth; ++i)
        g.matrix.at(i, g.n_computed + i) = s.truth[i].length();
    for (std::size_t j = 0; j < g.n_computed; ++j)
        g.matrix.at(g.n_truth + j, j) = s.computed[j].length();
    for (std::size_t i = 0; i < g.n_computed; ++i)
        for (std::size_t j = 0; j < g.n_truth; ++j)
            g.matrix.at(g.n_truth + i, g.n_computed + j) = 0;
    return g;
}

// One selected edge of the optimal match. Truth-side nullopt marks a
// false-positive node, computed-side nullopt a false-negative node.
struct MatchedPair {
    std::optional<Identity> truth;
    std::optional<Identity> computed;
    std::int64_t fn = 0;
    std::int64_t fp = 0;
};

struct TruthToResultMatch {
    std::vector<MatchedPair> pairs;
    std::int64_t idtp = 0;
    std::int64_t idfp = 0;
    std::int64_t idfn = 0;
    // (f+, f-) pairs; recorded but no score is derived from them.
    std::int64_t idtn_pairs = 0;
    std::int64_t total_cost = 0;
    std::set<Identity> mt;
    std::set<Identity> mc;
    std::map<Identity, Identity> gamma_m;  // truth -> computed over MT
    std::map<Identity, Identity> tau_m;    // computed -> truth over MC
};

inline TruthToResultMatch match_truth_to_result(const Scenario& s) {
    const IdGraph g = build_id_graph(s);
    const auto solution = solve_min_cost_assignment(g.matrix);

    TruthToResultMatch m;
    m.total_cost = solution.total_cost;
    for (std::size_t i = 0; i < g.n_truth + g.n_computed; ++i) {
        const std::size_t j = solution.row_to_col[i];
        MatchedPair pair;
        if (i < g.n_truth) {
            const Trajectory& tau = s.truth[i];
            pair.truth = tau.identity;
            if (j < g.n_computed) {
                const Trajectory& gamma = s.computed[j];
                const PairCost c = pair_cost(&tau, &gamma, s.mode);
                pair.computed = gamma.identity;
                pair.fn = c.fn;
                pair.fp = c.fp;
                m.mt.insert(tau.identity);
                m.mc.insert(gamma.identity);
                m.gamma_m.emplace(tau.identity, gamma.identity);
                m.tau_m.emplace(gamma.identity, tau.identity);
            } else {
                pair.fn = tau.length();
            }
        } else if (j < g.n_computed) {
            pair.computed = s.computed[j].identity;
            pair.fp = s.computed[j].length();
        } else {
            ++m.idtn_pairs;
            continue;
        }
        m.idfn += pair.fn;
        m.idfp += pair.fp;
        m.pairs.push_back(std::move(pair));
    }

    m.idtp = s.total_truth_length() - m.idfn;
    const std::int64_t idtp_from_computed = s.total_computed_length() - m.idfp;
    if (m.idtp != idtp_from_computed)
        throw std::logic_error("IDTP mismatch between truth-side and computed-side sums");
    return m;
}

struct IdScores {
    double idp = 0;
    double idr = 0;
    double idf1 = 0;
    std::int64_t idtp = 0;
    std::int64_t idfp = 0;
    std::int64_t idfn = 0;
};

// Zero denominators score 0; the conservative convention.
inline IdScores id_scores(const TruthToResultMatch& m) {
    IdScores s;
    s.idtp = m.idtp;
    s.idfp = m.idfp;
    s.idfn = m.idfn;
    const std::int64_t p_den = m.idtp + m.idfp;
    const std::int64_t r_den = m.idtp + m.idfn;
    const std::int64_t f_den = 2 * m.idtp + m.idfp + m.idfn;
    s.idp = p_den > 0 ? static_cast<double>(m.idtp) / static_cast<double>(p_den) : 0.0;
    s.idr = r_den > 0 ? static_cast<double>(m.idtp) / static_cast<double>(r_den) : 0.0;
    s.idf1 = f_den > 0 ? 2.0 * static_cast<double>(m.idtp) / static_cast<double>(f_den) : 0.0;
    return s;
}

struct CoverageRatio {
    std::int64_t covered = 0;
    std::int64_t total = 0;
    double value() const {
        return total > 0 ? static_cast<double>(covered) / static_cast<double>(total) : 0.0;
    }
};

struct Coverage {
    CoverageRatio truth;     // equals ID recall
    CoverageRatio computed;  // equals ID precision
};

// Independent route to IDR/IDP: per matched pair, count the detections the
// partner explains, site by site, normalized by the summed length of all
// trajectories on that side. Unmatched trajectories contribute only to the
// denominator.
inline Coverage coverage_oracle(const Scenario& s, const TruthToResultMatch& m) {
    std::map<Identity, const Trajectory*> computed_by_id;
    for (const Trajectory& t : s.computed) computed_by_id.emplace(t.identity, &t);

    Coverage cov;
    for (const Trajectory& tau : s.truth) {
        cov.truth.total += tau.length();
        auto partner = m.gamma_m.find(tau.identity);
        if (partner == m.gamma_m.end()) continue;
        const Trajectory* gamma = computed_by_id.at(partner->second);
        for (const Detection& d : tau.detections)
            if (!is_miss(&d, gamma->at_site(d.site), s.mode)) ++cov.truth.covered;
    }

    std::map<Identity, const Trajectory*> truth_by_id;
    for (const Trajectory& t : s.truth) truth_by_id.emplace(t.identity, &t);
    for (const Trajectory& gamma : s.computed) {
        cov.computed.total += gamma.length();
        auto partner = m.tau_m.find(gamma.identity);
        if (partner == m.tau_m.end()) continue;
        const Trajectory* tau = truth_by_id.at(partner->second);
        for (const Detection& d : gamma.detections)
            if (!is_miss(tau->at_site(d.site), &d, s.mode)) ++cov.computed.covered;
    }
    return cov;
}

// One line per selected pair: truth_id,computed_id,fn,fp with literal
// FN/FP tags standing in for irregular partners. Pairs of two irregular
// nodes name no identity and are omitted.
inline void write_truth_to_result(const TruthToResultMatch& m, std::ostream& out) {
    for (const MatchedPair& p : m.pairs) {
        out << (p.truth ? *p.truth : "FP") << ','
            << (p.computed ? *p.computed : "FN") << ','
            << p.fn << ',' << p.fp << '\n';
    }
}

} // namespace mtmc
