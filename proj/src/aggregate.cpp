#include "optbin/aggregate.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

namespace optbin {

namespace {

double xlogy_ratio(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

// Divergence of the bin with `ne`/`e` records against the totals; uses the
// count sums directly so that a full merge yields exactly p = q = 1.
double bin_divergence(std::int64_t ne, std::int64_t e, std::int64_t ne_total,
                      std::int64_t e_total, Divergence kind) {
    const double p = static_cast<double>(ne) / static_cast<double>(ne_total);
    const double q = static_cast<double>(e) / static_cast<double>(e_total);
    return divergence_contrib(p, q, kind);
}

}  // namespace

double woe(std::int64_t nonevent, std::int64_t event, std::int64_t nonevent_total,
           std::int64_t event_total) {
    if (nonevent <= 0 || event <= 0 || nonevent_total <= 0 || event_total <= 0)
        throw ZeroCount("weight of evidence needs positive counts");
    const double p = static_cast<double>(nonevent) / static_cast<double>(nonevent_total);
    const double q = static_cast<double>(event) / static_cast<double>(event_total);
    return std::log(p / q);
}

double divergence_contrib(double p, double q, Divergence kind) {
    if (kind == Divergence::IV) {
        if (!(p > 0.0) || !(q > 0.0)) throw ZeroCount("information value needs p, q > 0");
        return (p - q) * std::log(p / q);
    }
    if (p < 0.0 || q < 0.0 || (p == 0.0 && q == 0.0))
        throw ZeroCount("Jensen-Shannon contribution needs p, q >= 0, not both 0");
    const double m = 0.5 * (p + q);
    return 0.5 * (xlogy_ratio(p, m) + xlogy_ratio(q, m));
}

double two_proportion_z(std::int64_t events1, std::int64_t nonevents1, std::int64_t events2,
                        std::int64_t nonevents2) {
    const double n1 = static_cast<double>(events1 + nonevents1);
    const double n2 = static_cast<double>(events2 + nonevents2);
    const double p1 = static_cast<double>(events1) / n1;
    const double p2 = static_cast<double>(events2) / n2;
    const double pooled = static_cast<double>(events1 + events2) / (n1 + n2);
    const double var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
    if (!(var > 0.0)) return 0.0;
    return (p1 - p2) / std::sqrt(var);
}

double two_proportion_pvalue(std::int64_t events1, std::int64_t nonevents1,
                             std::int64_t events2, std::int64_t nonevents2) {
    const double z = two_proportion_z(events1, nonevents1, events2, nonevents2);
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

AggregateSet build_binary(const PrebinTable& table, Divergence kind) {
    if (!table.target.is_binary()) throw BinningError("build_binary needs a binary table");
    AggregateSet a;
    a.target = table.target;
    a.divergence = kind;
    a.n = table.size();
    a.count = table.count;
    a.nonevent = table.nonevent;
    a.event = table.event;
    a.total = table.total();
    a.total_nonevent = table.total_nonevent();
    a.total_event = table.total_event();

    const int n = a.n;
    a.records = TriMatrix<std::int64_t>(n);
    a.nonevents = TriMatrix<std::int64_t>(n);
    a.events = TriMatrix<std::int64_t>(n);
    a.divergence_value = TriMatrix<double>(n);
    a.event_rate = TriMatrix<double>(n);
    for (int i = 0; i < n; ++i) {
        std::int64_t ne = 0, e = 0;
        for (int j = i; j >= 0; --j) {
            ne += table.nonevent[j];
            e += table.event[j];
            a.nonevents(i, j) = ne;
            a.events(i, j) = e;
            a.records(i, j) = ne + e;
            a.event_rate(i, j) = static_cast<double>(e) / static_cast<double>(ne + e);
            a.divergence_value(i, j) =
                bin_divergence(ne, e, a.total_nonevent, a.total_event, kind);
        }
    }
    return a;
}

AggregateSet build_continuous(const PrebinTable& table, NormP norm) {
    if (!table.target.is_continuous())
        throw BinningError("build_continuous needs a continuous table");
    AggregateSet a;
    a.target = table.target;
    a.norm = norm;
    a.n = table.size();
    a.count = table.count;
    a.sum = table.sum;
    a.total = table.total();

    const int n = a.n;
    a.records = TriMatrix<std::int64_t>(n);
    a.mean = TriMatrix<double>(n);
    a.deviation = TriMatrix<double>(n);
    std::vector<double> mu(n);
    for (int z = 0; z < n; ++z) mu[z] = table.mean(z);
    for (int i = 0; i < n; ++i) {
        std::int64_t r = 0;
        double s = 0.0;
        for (int j = i; j >= 0; --j) {
            r += table.count[j];
            s += table.sum[j];
            a.records(i, j) = r;
            const double u = s / static_cast<double>(r);
            a.mean(i, j) = u;
            double acc = 0.0;
            for (int z = j; z <= i; ++z) {
                const double d = mu[z] - u;
                acc += norm == NormP::L1 ? std::abs(d) : d * d;
            }
            a.deviation(i, j) = norm == NormP::L1 ? acc : std::sqrt(acc);
        }
    }
    return a;
}

AggregateSet build_multiclass(const PrebinTable& table, Divergence kind) {
    if (!table.target.is_multiclass())
        throw BinningError("build_multiclass needs a multi-class table");
    AggregateSet a;
    a.target = table.target;
    a.divergence = kind;
    a.n = table.size();
    a.count = table.count;
    a.class_count = table.class_count;
    a.total = table.total();
    a.class_totals = table.class_totals();

    const int n = a.n;
    const int classes = table.target.class_count;
    for (int c = 0; c < classes; ++c) {
        if (a.class_totals[c] == 0)
            throw InfeasibleInput("class " + std::to_string(c) + " has no records");
    }
    a.records = TriMatrix<std::int64_t>(n);
    a.class_divergence.assign(classes, TriMatrix<double>(n));
    a.class_event_rate.assign(classes, TriMatrix<double>(n));
    for (int i = 0; i < n; ++i) {
        std::int64_t r = 0;
        std::vector<std::int64_t> per_class(classes, 0);
        for (int j = i; j >= 0; --j) {
            r += table.count[j];
            for (int c = 0; c < classes; ++c) per_class[c] += table.class_count[j][c];
            a.records(i, j) = r;
            for (int c = 0; c < classes; ++c) {
                const std::int64_t e = per_class[c];
                const std::int64_t ne = r - e;
                a.class_event_rate[c](i, j) = static_cast<double>(e) / static_cast<double>(r);
                a.class_divergence[c](i, j) =
                    bin_divergence(ne, e, a.total - a.class_totals[c], a.class_totals[c], kind);
            }
        }
    }
    return a;
}

AggregateSet build_aggregates(const PrebinTable& table, Divergence kind, NormP norm) {
    switch (table.target.kind) {
        case TargetKind::Kind::Binary: return build_binary(table, kind);
        case TargetKind::Kind::Continuous: return build_continuous(table, norm);
        case TargetKind::Kind::Multiclass: return build_multiclass(table, kind);
    }
    return build_binary(table, kind);
}

PValuePairs::PValuePairs(int n, std::optional<double> alpha, std::vector<PValuePair> pairs)
    : n_(n), alpha_(alpha), pairs_(std::move(pairs)) {
    lookup_.assign(static_cast<std::size_t>(n) * n * n, 0);
    for (const auto& p : pairs_) {
        if (p.l != p.i + 1 || p.j > p.i || p.k < p.l || p.k >= n)
            throw BinningError("malformed p-value pair");
        lookup_[(static_cast<std::size_t>(p.i) * n + p.j) * n + p.k] = 1;
    }
}

bool PValuePairs::contains(int i, int j, int k) const {
    if (lookup_.empty()) return false;
    return lookup_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k] != 0;
}

PValuePairs pvalue_pairs(int n, const TriMatrix<std::int64_t>& nonevents,
                         const TriMatrix<std::int64_t>& events, double alpha) {
    const double zscore = normal_quantile(1.0 - alpha / 2.0);
    std::vector<PValuePair> out;
    for (int i = 0; i + 1 < n; ++i) {
        const int l = i + 1;
        for (int j = 0; j <= i; ++j) {
            const auto x = events(i, j);
            const auto y = nonevents(i, j);
            for (int k = l; k < n; ++k) {
                const auto w = events(k, l);
                const auto z = nonevents(k, l);
                if (std::abs(two_proportion_z(x, y, w, z)) < zscore) out.push_back({i, j, k, l});
            }
        }
    }
    return PValuePairs(n, alpha, std::move(out));
}

}  // namespace optbin
