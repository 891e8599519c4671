#include "roster/oracle.hpp"

#include "roster/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace roster {

namespace {

constexpr double kTol = 1e-6;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaxDomain = 1 << 20;

struct Fixing {
    bool infeasible = false;
    std::vector<char> fixed;
    std::vector<double> value;
};

bool near_int(double x) { return std::fabs(x - std::round(x)) <= kTol; }

Fixing fix_forced(const CanonicalModel& m) {
    const auto& vars = m.vars();
    Fixing f;
    f.fixed.assign(vars.size(), 0);
    f.value.assign(vars.size(), 0);
    auto set = [&](int j, double v) {
        const auto& var = vars[static_cast<std::size_t>(j)];
        if (!near_int(v) || v < var.lb - kTol || v > var.ub + kTol)
            f.infeasible = true;
        v = std::round(v);
        if (f.fixed[static_cast<std::size_t>(j)] && f.value[static_cast<std::size_t>(j)] != v)
            f.infeasible = true;
        f.fixed[static_cast<std::size_t>(j)] = 1;
        f.value[static_cast<std::size_t>(j)] = v;
    };
    for (const auto& r : m.rows()) {
        if (r.terms.size() == 1 && r.sense == Sense::EQ) {
            set(r.terms[0].var, r.rhs / r.terms[0].coef);
            continue;
        }
        if (r.sense == Sense::GE || r.rhs != 0 || r.terms.empty())
            continue;
        const bool all_pos = std::all_of(r.terms.begin(), r.terms.end(), [&](const Term& t) {
            return t.coef > 0 && vars[static_cast<std::size_t>(t.var)].lb == 0;
        });
        if (all_pos)
            for (const auto& t : r.terms)
                set(t.var, 0);
    }
    return f;
}

class Enumerator {
public:
    Enumerator(const CanonicalModel& m, Fixing fix) : m_(m), vars_(m.vars()), rows_(m.rows()), fix_(std::move(fix)) {
        n_ = vars_.size();
        var_rows_.assign(n_, {});
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (const auto& t : rows_[r].terms)
                var_rows_[static_cast<std::size_t>(t.var)].push_back({static_cast<int>(r), t.coef});
        value_ = fix_.value;
    }

    void prepare(int max_free) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (fix_.fixed[j])
                continue;
            if (vars_[j].role == VarRole::Decision)
                free_.push_back(static_cast<int>(j));
            else
                aux_.push_back(static_cast<int>(j));
        }
        if (static_cast<int>(free_.size()) > max_free)
            throw OracleSizeError("oracle: " + std::to_string(free_.size()) + " free decision variables exceed the limit of " +
                                  std::to_string(max_free));
        for (int j : free_)
            domain_check(j);
        for (int j : aux_)
            domain_check(j);
        order_aux();

        // Activity bounds for pruning: assigned part plus the range of unassigned terms.
        assigned_.assign(rows_.size(), 0);
        min_rem_.assign(rows_.size(), 0);
        max_rem_.assign(rows_.size(), 0);
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (const auto& t : rows_[r].terms) {
                const auto j = static_cast<std::size_t>(t.var);
                if (fix_.fixed[j]) {
                    assigned_[r] += t.coef * value_[j];
                } else {
                    min_rem_[r] += std::min(t.coef * vars_[j].lb, t.coef * vars_[j].ub);
                    max_rem_[r] += std::max(t.coef * vars_[j].lb, t.coef * vars_[j].ub);
                }
            }
        base_obj_ = 0;
        for (std::size_t j = 0; j < n_; ++j)
            if (fix_.fixed[j])
                base_obj_ += vars_[j].obj * value_[j];
        aux_opt_ = 0;
        for (int j : aux_) {
            const auto& v = vars_[static_cast<std::size_t>(j)];
            aux_opt_ += std::max(v.obj * v.lb, v.obj * v.ub);
        }
        free_opt_.assign(free_.size() + 1, 0);
        for (std::size_t k = free_.size(); k-- > 0;) {
            const auto& v = vars_[static_cast<std::size_t>(free_[k])];
            free_opt_[k] = free_opt_[k + 1] + std::max(v.obj * v.lb, v.obj * v.ub);
        }
    }

    bool root_feasible() const {
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (!row_ok(r))
                return false;
        return true;
    }

    void run() { dfs(0, base_obj_); }

    bool found() const { return best_ > kNegInf; }
    double best() const { return best_; }

    std::vector<double> best_values() {
        value_ = best_decisions_;
        record_ = true;
        eval_aux(0);
        return value_;
    }

    int free_count() const { return static_cast<int>(free_.size()); }

private:
    struct Step {
        int var;
        bool branch;
        std::vector<int> closes;  // rows closed by a branching step
    };

    void domain_check(int j) {
        const auto& v = vars_[static_cast<std::size_t>(j)];
        if (!(v.ub - v.lb <= kMaxDomain))
            throw OracleSizeError("oracle: variable " + v.name + " has an unbounded domain");
    }

    void order_aux() {
        std::vector<int> open(rows_.size(), 0);
        std::vector<char> done(n_, 0);
        for (std::size_t j = 0; j < n_; ++j)
            done[j] = fix_.fixed[j] || vars_[j].role == VarRole::Decision;
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (const auto& t : rows_[r].terms)
                if (!done[static_cast<std::size_t>(t.var)])
                    ++open[r];
        std::vector<int> pending = aux_;
        while (!pending.empty()) {
            auto closable = std::find_if(pending.begin(), pending.end(), [&](int j) {
                for (const auto& [r, c] : var_rows_[static_cast<std::size_t>(j)])
                    if (open[static_cast<std::size_t>(r)] > 1)
                        return false;
                return true;
            });
            Step s;
            if (closable != pending.end()) {
                s.var = *closable;
                s.branch = false;
                pending.erase(closable);
            } else {
                auto pick = std::min_element(pending.begin(), pending.end(), [&](int a, int b) {
                    const auto& va = vars_[static_cast<std::size_t>(a)];
                    const auto& vb = vars_[static_cast<std::size_t>(b)];
                    return va.ub - va.lb < vb.ub - vb.lb;
                });
                s.var = *pick;
                s.branch = true;
                pending.erase(pick);
            }
            done[static_cast<std::size_t>(s.var)] = 1;
            for (const auto& [r, c] : var_rows_[static_cast<std::size_t>(s.var)])
                if (--open[static_cast<std::size_t>(r)] == 0 && s.branch)
                    s.closes.push_back(r);
            steps_.push_back(std::move(s));
        }
    }

    bool row_ok(std::size_t r) const {
        const auto& row = rows_[r];
        const double lo = assigned_[r] + min_rem_[r];
        const double hi = assigned_[r] + max_rem_[r];
        switch (row.sense) {
            case Sense::LE: return lo <= row.rhs + kTol;
            case Sense::GE: return hi >= row.rhs - kTol;
            case Sense::EQ: return lo <= row.rhs + kTol && hi >= row.rhs - kTol;
        }
        return false;
    }

    bool assign(int j, double val) {
        const auto& v = vars_[static_cast<std::size_t>(j)];
        value_[static_cast<std::size_t>(j)] = val;
        bool ok = true;
        for (const auto& [r, c] : var_rows_[static_cast<std::size_t>(j)]) {
            const auto ur = static_cast<std::size_t>(r);
            assigned_[ur] += c * val;
            min_rem_[ur] -= std::min(c * v.lb, c * v.ub);
            max_rem_[ur] -= std::max(c * v.lb, c * v.ub);
            ok = ok && row_ok(ur);
        }
        return ok;
    }

    void unassign(int j, double val) {
        const auto& v = vars_[static_cast<std::size_t>(j)];
        for (const auto& [r, c] : var_rows_[static_cast<std::size_t>(j)]) {
            const auto ur = static_cast<std::size_t>(r);
            assigned_[ur] -= c * val;
            min_rem_[ur] += std::min(c * v.lb, c * v.ub);
            max_rem_[ur] += std::max(c * v.lb, c * v.ub);
        }
    }

    void dfs(std::size_t k, double obj) {
        if (obj + free_opt_[k] + aux_opt_ < best_ - 1e-9)
            return;
        if (k == free_.size()) {
            const double aux = eval_aux(0);
            if (aux > kNegInf && obj + aux > best_ + 1e-9) {
                best_ = obj + aux;
                best_decisions_ = value_;
            }
            return;
        }
        const int j = free_[k];
        const auto& v = vars_[static_cast<std::size_t>(j)];
        const bool up_first = v.obj > 0;
        const int lo = static_cast<int>(std::ceil(v.lb - kTol));
        const int hi = static_cast<int>(std::floor(v.ub + kTol));
        for (int i = 0; i <= hi - lo; ++i) {
            const double val = up_first ? hi - i : lo + i;
            if (assign(j, val))
                dfs(k + 1, obj + v.obj * val);
            unassign(j, val);
        }
    }

    // Feasible interval of a variable whose rows are otherwise fully assigned.
    bool interval(int j, double& lo, double& hi) const {
        const auto& v = vars_[static_cast<std::size_t>(j)];
        lo = v.lb;
        hi = v.ub;
        for (const auto& [r, c] : var_rows_[static_cast<std::size_t>(j)]) {
            const auto& row = rows_[static_cast<std::size_t>(r)];
            double rest = 0;
            for (const auto& t : row.terms)
                if (t.var != j)
                    rest += t.coef * value_[static_cast<std::size_t>(t.var)];
            const double q = (row.rhs - rest) / c;
            const bool upper = (row.sense == Sense::LE) == (c > 0);
            if (row.sense == Sense::EQ) {
                lo = std::max(lo, q);
                hi = std::min(hi, q);
            } else if (upper) {
                hi = std::min(hi, q);
            } else {
                lo = std::max(lo, q);
            }
        }
        lo = std::ceil(lo - kTol);
        hi = std::floor(hi + kTol);
        return lo <= hi;
    }

    double eval_aux(std::size_t k) {
        if (k == steps_.size())
            return 0;
        const Step& s = steps_[k];
        const auto& v = vars_[static_cast<std::size_t>(s.var)];
        if (!s.branch) {
            double lo = 0, hi = 0;
            if (!interval(s.var, lo, hi))
                return kNegInf;
            const double val = v.obj > 0 ? hi : lo;
            value_[static_cast<std::size_t>(s.var)] = val;
            const double rest = eval_aux(k + 1);
            return rest == kNegInf ? kNegInf : v.obj * val + rest;
        }
        double best = kNegInf;
        double arg = v.lb;
        for (double val = v.lb; val <= v.ub + kTol; val += 1) {
            value_[static_cast<std::size_t>(s.var)] = val;
            if (!closed_rows_ok(s))
                continue;
            const double rest = eval_aux(k + 1);
            if (rest > kNegInf && v.obj * val + rest > best + 1e-9) {
                best = v.obj * val + rest;
                arg = val;
            }
        }
        if (record_ && best > kNegInf) {
            value_[static_cast<std::size_t>(s.var)] = arg;
            eval_aux(k + 1);
        }
        return best;
    }

    bool closed_rows_ok(const Step& s) const {
        for (int r : s.closes) {
            const auto& row = rows_[static_cast<std::size_t>(r)];
            double a = 0;
            for (const auto& t : row.terms)
                a += t.coef * value_[static_cast<std::size_t>(t.var)];
            const bool ok = row.sense == Sense::LE   ? a <= row.rhs + kTol
                            : row.sense == Sense::GE ? a >= row.rhs - kTol
                                                     : std::fabs(a - row.rhs) <= kTol;
            if (!ok)
                return false;
        }
        return true;
    }

    const CanonicalModel& m_;
    const std::vector<Variable>& vars_;
    const std::vector<Constraint>& rows_;
    Fixing fix_;
    std::size_t n_ = 0;
    std::vector<std::vector<std::pair<int, double>>> var_rows_;
    std::vector<double> value_;
    std::vector<int> free_;
    std::vector<int> aux_;
    std::vector<Step> steps_;
    std::vector<double> assigned_, min_rem_, max_rem_;
    std::vector<double> free_opt_;
    double base_obj_ = 0;
    double aux_opt_ = 0;
    double best_ = kNegInf;
    std::vector<double> best_decisions_;
    bool record_ = false;
};

}  // namespace

int oracle_free_decisions(const CanonicalModel& model) {
    const Fixing f = fix_forced(model);
    int n = 0;
    for (std::size_t j = 0; j < model.vars().size(); ++j)
        if (!f.fixed[j] && model.vars()[j].role == VarRole::Decision)
            ++n;
    return n;
}

RawSolution exhaustive_oracle(const CanonicalModel& model, int max_free) {
    const auto t0 = std::chrono::steady_clock::now();
    RawSolution raw;
    raw.backend = "oracle";
    raw.gap_target = 0;
    Fixing fix = fix_forced(model);
    const bool infeasible = fix.infeasible;
    Enumerator e(model, std::move(fix));
    e.prepare(max_free);
    if (!infeasible && e.root_feasible())
        e.run();
    if (!infeasible && e.found()) {
        raw.status = SolveStatus::Optimal;
        const auto values = e.best_values();
        for (std::size_t j = 0; j < values.size(); ++j)
            raw.values[model.vars()[j].name] = values[j] == 0 ? 0 : values[j];
        raw.objective = model.objective(values);
        raw.reported_objective = e.best();
        raw.bound = raw.objective;
    } else {
        raw.status = SolveStatus::Infeasible;
    }
    raw.solver_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return raw;
}

}  // namespace roster
