#pragma once

#include <map>
#include <string>
#include <vector>

#include "cremona/basegeom.hpp"
#include "cremona/mapcore.hpp"

namespace cremona {

/// One inverse step O -> Phi^{-1}(O), exact and canonicalized. Throws
/// HitsInverseFPoint when the point is a base point of the inverse triple
/// (all three coordinates evaluate to zero).
inline ProjPoint step_inverse(const BiratMap& m, const ProjPoint& p) { return m.apply_inverse(p); }

inline ProjPoint step_forward(const BiratMap& m, const ProjPoint& p) { return m.apply(p); }

enum class OrbitStatus {
    Matched,    // reached an F-point of the opposite map (pairing candidate)
    Cycle,      // returned to the starting point
    TailOfCycle,// became periodic without revisiting the start
    Halted,     // stepped onto an indeterminacy point outside any match
    Unresolved, // ran to the horizon without any of the above
};

/// Exact orbit coordinates can grow doubly exponentially (each step of a
/// degree-n map raises coordinate heights to roughly the n-th power), so
/// orbit tracking stops once a point's total digit count passes this cap
/// and reports the orbit as unresolved at that step.
constexpr long kOrbitHeightCapDigits = 20000;

inline long point_height_digits(const ProjPoint& p)
{
    long total = 0;
    for (int i = 0; i < 3; ++i) {
        total += static_cast<long>(mpz_sizeinbase(p[i].get_num().get_mpz_t(), 10));
        total += static_cast<long>(mpz_sizeinbase(p[i].get_den().get_mpz_t(), 10));
    }
    return total;
}

struct OrbitRecord {
    ProjPoint start;
    std::vector<ProjPoint> trajectory; // trajectory[t] = Phi^{∓t}(start)
    OrbitStatus status = OrbitStatus::Unresolved;
    int cycle_period = 0;
    int entry_offset = 0; // first index on the cycle (0 for a true cycle)
    int matched_step = -1;
    int horizon = 0;
};

enum class OrbitDirection { Inverse, Forward };

/// Orbit of a single point under the inverse (or forward) map with exact
/// revisit detection. All outcomes are encoded in the status.
inline OrbitRecord orbit_of(const BiratMap& m, const ProjPoint& start, OrbitDirection dir,
                            int horizon)
{
    OrbitRecord rec{start, {start}, OrbitStatus::Unresolved, 0, 0, -1, horizon};
    std::map<ProjPoint, int> seen{{start, 0}};
    ProjPoint cur = start;
    for (int t = 1; t <= horizon; ++t) {
        if (point_height_digits(cur) > kOrbitHeightCapDigits) {
            rec.horizon = t - 1;
            return rec;
        }
        try {
            cur = dir == OrbitDirection::Inverse ? m.apply_inverse(cur) : m.apply(cur);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::HitsInverseFPoint)
                throw;
            rec.status = OrbitStatus::Halted;
            return rec;
        }
        rec.trajectory.push_back(cur);
        auto it = seen.find(cur);
        if (it != seen.end()) {
            rec.entry_offset = it->second;
            rec.cycle_period = t - it->second;
            rec.status = it->second == 0 ? OrbitStatus::Cycle : OrbitStatus::TailOfCycle;
            return rec;
        }
        seen.emplace(cur, t);
    }
    return rec;
}

struct PairMatch {
    int alpha = -1; // index into the forward F-point list
    int beta = -1;  // index into the inverse F-point list
    int m = 0;      // Phi^{-m}(O_alpha) = O^{(-1)}_beta
};

enum class PointClass { Int, Cycle, Tails, Inf, Anomalous };

inline const char* point_class_name(PointClass c)
{
    switch (c) {
    case PointClass::Int: return "int";
    case PointClass::Cycle: return "cycle";
    case PointClass::Tails: return "tails";
    case PointClass::Inf: return "inf/unresolved";
    case PointClass::Anomalous: return "anomalous";
    }
    return "?";
}

/// Result of the indeterminacy-set decomposition: matched pairs, and a
/// class tag for every F-point on both sides. Points that survive the
/// horizon are reported honestly as unresolved rather than proved infinite.
struct Decomposition {
    std::vector<PairMatch> pairs; // sorted by (m, alpha)
    int sigma1 = 0;
    std::vector<PointClass> fwd_class, inv_class;
    std::vector<OrbitRecord> fwd_orbits; // inverse-map orbits of the O_alpha
    std::vector<OrbitRecord> inv_orbits; // forward-map orbits of the O^(-1)_beta
    std::vector<std::string> anomalies;
    int horizon = 0;
    bool any_unresolved = false;
};

/// Iterative refinement of the two F-point pools: at step k the k-th
/// inverse images of the surviving forward points are intersected with the
/// surviving inverse points; matches are paired and removed from both
/// pools. Cycles and merges are detected by exact revisit checks. The
/// inverse-side points are classified symmetrically by forward orbits.
inline Decomposition decompose(const BiratMap& m, const BaseData& base, int horizon = 50)
{
    Decomposition out;
    out.horizon = horizon;
    size_t nf = base.fwd.size(), ni = base.inv.size();
    out.fwd_class.assign(nf, PointClass::Inf);
    out.inv_class.assign(ni, PointClass::Inf);

    std::vector<bool> alpha_alive(nf, true), beta_alive(ni, true);
    std::vector<ProjPoint> cur;
    std::vector<OrbitRecord> orbs;
    for (size_t a = 0; a < nf; ++a) {
        cur.push_back(base.fwd[a].point);
        orbs.push_back({base.fwd[a].point, {base.fwd[a].point}, OrbitStatus::Unresolved, 0, 0,
                        -1, horizon});
    }
    std::map<ProjPoint, int> beta_index;
    for (size_t b = 0; b < ni; ++b)
        beta_index.emplace(base.inv[b].point, static_cast<int>(b));

    // global trajectory registry for merge (tail) detection
    std::map<ProjPoint, size_t> seen_by;
    for (size_t a = 0; a < nf; ++a)
        seen_by.emplace(base.fwd[a].point, a);

    for (int k = 0; k <= horizon; ++k) {
        // match pass at the current positions
        for (size_t a = 0; a < nf; ++a) {
            if (!alpha_alive[a])
                continue;
            auto it = beta_index.find(cur[a]);
            if (it == beta_index.end())
                continue;
            int b = it->second;
            if (beta_alive[static_cast<size_t>(b)]) {
                out.pairs.push_back({static_cast<int>(a), b, k});
                alpha_alive[a] = false;
                beta_alive[static_cast<size_t>(b)] = false;
                out.fwd_class[a] = PointClass::Int;
                out.inv_class[static_cast<size_t>(b)] = PointClass::Int;
                orbs[a].status = OrbitStatus::Matched;
                orbs[a].matched_step = k;
            } else if (k > 0) {
                // arrived at an already-claimed inverse F-point: the
                // bookkeeping of the difference equation does not cover this
                alpha_alive[a] = false;
                out.fwd_class[a] = PointClass::Anomalous;
                orbs[a].status = OrbitStatus::Halted;
                out.anomalies.push_back("inverse orbit of forward F-point #" +
                                        std::to_string(a + 1) + " reaches " +
                                        cur[a].to_string() + " at step " + std::to_string(k) +
                                        ", an inverse F-point that was already matched");
            }
        }
        if (k == horizon)
            break;
        // step pass
        for (size_t a = 0; a < nf; ++a) {
            if (!alpha_alive[a])
                continue;
            if (point_height_digits(cur[a]) > kOrbitHeightCapDigits) {
                // coordinate size exploded: stop tracking, keep the honest
                // unresolved/tails classification at this effective horizon
                alpha_alive[a] = false;
                orbs[a].horizon = k;
                if (out.fwd_class[a] == PointClass::Inf)
                    out.any_unresolved = true;
                continue;
            }
            ProjPoint next = cur[a];
            try {
                next = m.apply_inverse(cur[a]);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::HitsInverseFPoint)
                    throw;
                // undefined step that is not a live match
                alpha_alive[a] = false;
                out.fwd_class[a] = PointClass::Anomalous;
                orbs[a].status = OrbitStatus::Halted;
                out.anomalies.push_back("inverse step undefined at " + cur[a].to_string() +
                                        " (orbit of forward F-point #" + std::to_string(a + 1) +
                                        ")");
                continue;
            }
            cur[a] = next;
            orbs[a].trajectory.push_back(next);
            // self-revisit: cycle or tail-of-own-cycle; such orbits repeat
            // themselves and can never reach a new point
            bool revisit = false;
            for (size_t t = 0; t + 1 < orbs[a].trajectory.size(); ++t) {
                if (orbs[a].trajectory[t] == next) {
                    orbs[a].entry_offset = static_cast<int>(t);
                    orbs[a].cycle_period = static_cast<int>(orbs[a].trajectory.size() - 1 - t);
                    orbs[a].status =
                        t == 0 ? OrbitStatus::Cycle : OrbitStatus::TailOfCycle;
                    out.fwd_class[a] = t == 0 ? PointClass::Cycle : PointClass::Tails;
                    alpha_alive[a] = false;
                    revisit = true;
                    break;
                }
            }
            if (revisit)
                continue;
            // merge with another orbit's trajectory: a tail in the paper's
            // sense; it stays eligible for matching (the refinement only
            // removes matched points)
            auto sb = seen_by.find(next);
            if (sb != seen_by.end() && sb->second != a) {
                if (out.fwd_class[a] == PointClass::Inf)
                    out.fwd_class[a] = PointClass::Tails;
            } else if (sb == seen_by.end()) {
                seen_by.emplace(next, a);
            }
        }
    }
    for (size_t a = 0; a < nf; ++a)
        if (alpha_alive[a] && out.fwd_class[a] == PointClass::Inf)
            out.any_unresolved = true;

    std::sort(out.pairs.begin(), out.pairs.end(), [](const PairMatch& x, const PairMatch& y) {
        if (x.m != y.m)
            return x.m < y.m;
        return x.alpha < y.alpha;
    });
    out.sigma1 = static_cast<int>(out.pairs.size());
    out.fwd_orbits = std::move(orbs);

    // classify the unmatched inverse-side points by forward orbits
    for (size_t b = 0; b < ni; ++b) {
        if (out.inv_class[b] == PointClass::Int) {
            out.inv_orbits.push_back({base.inv[b].point,
                                      {base.inv[b].point},
                                      OrbitStatus::Matched,
                                      0,
                                      0,
                                      0,
                                      horizon});
            continue;
        }
        OrbitRecord rec = orbit_of(m, base.inv[b].point, OrbitDirection::Forward, horizon);
        switch (rec.status) {
        case OrbitStatus::Cycle:
            out.inv_class[b] = PointClass::Cycle;
            break;
        case OrbitStatus::TailOfCycle:
            out.inv_class[b] = PointClass::Tails;
            break;
        case OrbitStatus::Halted: {
            // ran into a forward F-point; if that F-point is matched with
            // this beta the halt is explained, otherwise it merges (tail)
            out.inv_class[b] = PointClass::Tails;
            break;
        }
        case OrbitStatus::Matched:
        case OrbitStatus::Unresolved:
            out.inv_class[b] = PointClass::Inf;
            out.any_unresolved = true;
            break;
        }
        out.inv_orbits.push_back(std::move(rec));
    }
    return out;
}

} // namespace cremona
