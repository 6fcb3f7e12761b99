// Locally constant potentials as depth-d tables over the admissible words,
// with Holder metadata, plus real-valued functions and measures at a fixed
// cylinder resolution.
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "betatherm/beta.hpp"

namespace betatherm {

enum class Side { forward, transpose };

struct Potential {
    std::size_t depth = 1;
    std::map<Word, double> table;
    double theta = 1.0;         // Holder exponent in (0, 1]
    double holder_const = 0.0;  // >= variation over depth-d representatives
    Side side = Side::forward;

    // Validates that the table covers exactly the depth-d language of the
    // relevant shift and floors the Holder constant by the observed
    // variation of the table over 0-padded representatives.
    static Potential from_table(const BetaSpec& spec, std::size_t depth, std::map<Word, double> table,
                                double theta = 1.0, Side side = Side::forward,
                                double holder_const = 0.0) {
        if (depth == 0) throw SchemaError("potential depth must be positive");
        if (theta <= 0.0 || theta > 1.0) throw SchemaError("theta must lie in (0, 1]");
        const std::vector<Word> lang = enumerate_language(depth, spec, side == Side::transpose);
        for (const auto& [w, v] : table) {
            (void)v;
            if (std::find(lang.begin(), lang.end(), w) == lang.end())
                throw InadmissibleTableKey(format_word(w));
        }
        for (const Word& w : lang)
            if (!table.count(w))
                throw SchemaError("potential table misses admissible word \"" + format_word(w) + "\"");
        Potential a{depth, std::move(table), theta, holder_const, side};
        a.holder_const = std::max(holder_const, a.table_variation());
        return a;
    }

    static Potential zero(const BetaSpec& spec, std::size_t depth = 1, Side side = Side::forward) {
        std::map<Word, double> t;
        for (const Word& w : enumerate_language(depth, spec, side == Side::transpose)) t[w] = 0.0;
        return from_table(spec, depth, std::move(t), 1.0, side);
    }

    double operator()(const Word& w) const {
        const auto it = table.find(w);
        if (it == table.end()) throw NotAdmissible("no table entry for \"" + format_word(w) + "\"");
        return it->second;
    }
    // Value at the cylinder of a word of length >= depth.
    double at_prefix(const Word& w) const {
        if (w.size() < depth) throw DepthMismatch("word shorter than the potential depth");
        return (*this)(w.prefix(depth));
    }
    // Value at the cylinder of a sequence.
    double at_sequence(const EventuallyPeriodicSeq& s) const { return (*this)(s.first(depth)); }

    Potential scaled(double t) const {
        Potential a = *this;
        for (auto& [w, v] : a.table) {
            (void)w;
            v *= t;
        }
        a.holder_const = std::abs(t) * holder_const;
        return a;
    }

    double table_variation() const {
        double worst = 0.0;
        for (auto i = table.begin(); i != table.end(); ++i)
            for (auto j = std::next(i); j != table.end(); ++j) {
                const double d = shift_metric(i->first, j->first);
                if (d > 0.0)
                    worst = std::max(worst, std::abs(i->second - j->second) / std::pow(d, theta));
            }
        return worst;
    }
};

struct CylinderFunction {
    std::size_t depth = 1;
    std::map<Word, double> values;

    static CylinderFunction constant(const Language& lang, double c) {
        CylinderFunction f;
        f.depth = lang.depth();
        for (const Word& w : lang.words()) f.values[w] = c;
        return f;
    }

    double operator()(const Word& w) const {
        const auto it = values.find(w);
        if (it == values.end()) throw NotAdmissible("no value on cylinder \"" + format_word(w) + "\"");
        return it->second;
    }
    // Value at the depth-k cylinder containing a sequence.
    double at_sequence(const EventuallyPeriodicSeq& s) const { return (*this)(s.first(depth)); }

    double sup_abs() const {
        double m = 0.0;
        for (const auto& [w, v] : values) {
            (void)w;
            m = std::max(m, std::abs(v));
        }
        return m;
    }
};

struct CylinderMeasure {
    std::size_t depth = 1;
    std::map<Word, double> masses;

    double total() const {
        double s = 0.0;
        for (const auto& [w, m] : masses) {
            (void)w;
            s += m;
        }
        return s;
    }

    double operator()(const Word& w) const {
        const auto it = masses.find(w);
        if (it == masses.end()) throw NotAdmissible("no mass on cylinder \"" + format_word(w) + "\"");
        return it->second;
    }

    // Mass of a coarser cylinder [v], |v| <= depth.
    double cylinder_mass(const Word& v) const {
        if (v.size() > depth) throw DepthMismatch("cylinder finer than the measure resolution");
        double s = 0.0;
        for (const auto& [w, m] : masses)
            if (w.prefix(v.size()) == v) s += m;
        return s;
    }

    CylinderMeasure coarsened(std::size_t k) const {
        if (k > depth) throw DepthMismatch("cannot coarsen to a finer depth");
        CylinderMeasure out;
        out.depth = k;
        for (const auto& [w, m] : masses) out.masses[w.prefix(k)] += m;
        return out;
    }
};

}  // namespace betatherm
