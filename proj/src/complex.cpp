#include "cdg/complex.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cdg {

namespace {

bool same_module(const FreeModule& a, const FreeModule& b) {
    return *a.table == *b.table && a.gen_weights == b.gen_weights;
}

void require(bool ok, const std::string& code, const std::string& msg) {
    if (!ok) throw Error(code, msg);
}

Poly mono_poly(const VarTableP& table, const Monomial& m) {
    Poly p = Poly::zero(table);
    p.add_term(m, Scalar::one(table->field()));
    return p;
}

} // namespace

std::string FreeModule::name_of(size_t i) const {
    if (i < gen_names.size()) return gen_names[i];
    return "g" + std::to_string(i);
}

FreeModule direct_sum(const FreeModule& a, const FreeModule& b) {
    require(*a.table == *b.table, "MixedAmbient", "direct sum over different variable tables");
    FreeModule out{a.table, a.gen_weights, {}};
    out.gen_weights.insert(out.gen_weights.end(), b.gen_weights.begin(), b.gen_weights.end());
    for (size_t i = 0; i < a.rank(); ++i) out.gen_names.push_back(a.name_of(i));
    for (size_t i = 0; i < b.rank(); ++i) out.gen_names.push_back(b.name_of(i));
    return out;
}

size_t SliceBasis::index_of(size_t gen, const Monomial& m) const {
    auto it = index.find({gen, m});
    require(it != index.end(), "SliceMismatch", "element missing from weight slice");
    return it->second;
}

SliceBasis module_slice(const FreeModule& m, long weight) {
    SliceBasis out;
    for (size_t r = 0; r < m.rank(); ++r) {
        for (const Monomial& mono : monomials_of_weight(*m.table, weight - m.gen_weights[r]))
            out.elems.push_back({r, mono});
    }
    for (size_t i = 0; i < out.elems.size(); ++i) out.index[out.elems[i]] = i;
    return out;
}

ModuleMap ModuleMap::zero(const FreeModule& src, const FreeModule& tgt, long shift) {
    ModuleMap f;
    f.src = src;
    f.tgt = tgt;
    f.shift = shift;
    f.entries.assign(tgt.rank(), std::vector<Poly>(src.rank(), Poly::zero(src.table)));
    return f;
}

ModuleMap ModuleMap::identity(const FreeModule& m) {
    ModuleMap f = zero(m, m, 0);
    for (size_t i = 0; i < m.rank(); ++i)
        f.entries[i][i] = Poly::constant(m.table, Scalar::one(m.table->field()));
    return f;
}

ModuleMap ModuleMap::scaled_identity(const FreeModule& m, const Poly& g) {
    ModuleMap f = zero(m, m, g.is_zero() ? 0 : g.homogeneous_weight());
    for (size_t i = 0; i < m.rank(); ++i) f.entries[i][i] = g;
    return f;
}

void ModuleMap::validate() const {
    require(*src.table == *tgt.table, "MixedAmbient", "map between different variable tables");
    require(entries.size() == tgt.rank(), "ShapeMismatch", "row count differs from target rank");
    for (size_t r = 0; r < entries.size(); ++r) {
        require(entries[r].size() == src.rank(), "ShapeMismatch",
                "column count differs from source rank");
        for (size_t s = 0; s < entries[r].size(); ++s) {
            const Poly& e = entries[r][s];
            if (e.is_zero()) continue;
            require(*e.table() == *src.table, "MixedAmbient", "entry over a different table");
            long want = src.gen_weights[s] - tgt.gen_weights[r] + shift;
            if (!e.is_homogeneous() || e.homogeneous_weight() != want)
                throw Error("InhomogeneousEntry",
                            "entry (" + std::to_string(r) + "," + std::to_string(s) +
                                ") = " + e.str() + " is not homogeneous of weight " +
                                std::to_string(want));
        }
    }
}

bool ModuleMap::is_zero() const {
    for (const auto& row : entries)
        for (const Poly& e : row)
            if (!e.is_zero()) return false;
    return true;
}

ModuleMap ModuleMap::add(const ModuleMap& other) const {
    require(same_module(src, other.src) && same_module(tgt, other.tgt) && shift == other.shift,
            "ShapeMismatch", "sum of maps with different shapes or shifts");
    ModuleMap out = *this;
    for (size_t r = 0; r < entries.size(); ++r)
        for (size_t s = 0; s < entries[r].size(); ++s)
            out.entries[r][s] = out.entries[r][s] + other.entries[r][s];
    return out;
}

ModuleMap ModuleMap::sub(const ModuleMap& other) const { return add(other.negated()); }

ModuleMap ModuleMap::negated() const {
    ModuleMap out = *this;
    for (auto& row : out.entries)
        for (Poly& e : row) e = -e;
    return out;
}

ModuleMap ModuleMap::scaled(const Poly& g) const {
    ModuleMap out = *this;
    out.shift += g.is_zero() ? 0 : g.homogeneous_weight();
    for (auto& row : out.entries)
        for (Poly& e : row) e = e * g;
    return out;
}

ModuleMap ModuleMap::with_shift(long s) const {
    ModuleMap out = *this;
    out.shift = s;
    return out;
}

bool ModuleMap::equals(const ModuleMap& other) const {
    if (!same_module(src, other.src) || !same_module(tgt, other.tgt)) return false;
    if (shift != other.shift) return false;
    for (size_t r = 0; r < entries.size(); ++r)
        for (size_t s = 0; s < entries[r].size(); ++s)
            if (!(entries[r][s] == other.entries[r][s])) return false;
    return true;
}

ModuleMap compose(const ModuleMap& f, const ModuleMap& g) {
    require(same_module(f.src, g.tgt), "ShapeMismatch", "composition of non-composable maps");
    ModuleMap out = ModuleMap::zero(g.src, f.tgt, f.shift + g.shift);
    for (size_t r = 0; r < f.tgt.rank(); ++r)
        for (size_t s = 0; s < g.src.rank(); ++s) {
            Poly acc = Poly::zero(g.src.table);
            for (size_t k = 0; k < f.src.rank(); ++k)
                acc = acc + f.entries[r][k] * g.entries[k][s];
            out.entries[r][s] = acc;
        }
    return out;
}

ScalarMatrix slice_matrix(const ModuleMap& f, long src_weight,
                          const SliceBasis& src_slice, const SliceBasis& tgt_slice) {
    (void)src_weight;
    const Field& field = f.src.table->field();
    ScalarMatrix m(tgt_slice.elems.size(), src_slice.elems.size(), field);
    for (size_t j = 0; j < src_slice.elems.size(); ++j) {
        auto [s, alpha] = src_slice.elems[j];
        for (size_t r = 0; r < f.tgt.rank(); ++r) {
            const Poly& e = f.entries[r][s];
            for (const auto& [gamma, c] : e.terms()) {
                size_t i = tgt_slice.index_of(r, mono_mul(gamma, alpha));
                m.at(i, j) = m.at(i, j) + c;
            }
        }
    }
    return m;
}

ScalarMatrix evaluate_map(const ModuleMap& f, const std::vector<Scalar>& values) {
    require(values.size() == f.src.table->size(), "PointEvaluation",
            "one value per variable is required");
    std::vector<std::optional<Scalar>> vals(values.begin(), values.end());
    ScalarMatrix m(f.tgt.rank(), f.src.rank(), f.src.table->field());
    for (size_t r = 0; r < f.tgt.rank(); ++r)
        for (size_t s = 0; s < f.src.rank(); ++s) {
            Poly v = f.entries[r][s].substitute(vals);
            m.at(r, s) = v.constant_term();
        }
    return m;
}

void check_complex(const Complex& cx) {
    if (cx.mode == GradingMode::Z) {
        size_t len = cx.length();
        require(cx.maps.size() + 1 == std::max<size_t>(len, 1), "NotAComplex",
                "expected one map per adjacent pair of modules");
        for (size_t i = 0; i < cx.maps.size(); ++i) {
            require(same_module(cx.maps[i].src, cx.modules[i]) &&
                        same_module(cx.maps[i].tgt, cx.modules[i + 1]),
                    "NotAComplex", "map endpoints disagree with the module list");
            cx.maps[i].validate();
        }
        for (size_t i = 0; i + 1 < cx.maps.size(); ++i)
            require(compose(cx.maps[i + 1], cx.maps[i]).is_zero(), "NotAComplex",
                    "composite at position " + std::to_string(cx.lo + (long)i) + " is nonzero");
    } else {
        require(cx.modules.size() == 2 && cx.maps.size() == 2, "NotAComplex",
                "two modules and two maps are required");
        require(same_module(cx.maps[0].src, cx.modules[0]) &&
                    same_module(cx.maps[0].tgt, cx.modules[1]) &&
                    same_module(cx.maps[1].src, cx.modules[1]) &&
                    same_module(cx.maps[1].tgt, cx.modules[0]),
                "NotAComplex", "map endpoints disagree with the module list");
        cx.maps[0].validate();
        cx.maps[1].validate();
        require(compose(cx.maps[1], cx.maps[0]).is_zero() &&
                    compose(cx.maps[0], cx.maps[1]).is_zero(),
                "NotAComplex", "composites are nonzero");
    }
}

Complex shift_complex(const Complex& cx, long n) {
    Complex out = cx;
    bool odd = ((n % 2) + 2) % 2 == 1;
    for (FreeModule& m : out.modules)
        for (long& w : m.gen_weights) w -= n;
    for (ModuleMap& f : out.maps) {
        for (long& w : f.src.gen_weights) w -= n;
        for (long& w : f.tgt.gen_weights) w -= n;
        if (odd) f = f.negated();
    }
    if (cx.mode == GradingMode::Z) {
        out.lo -= n;
    } else if (odd) {
        std::swap(out.modules[0], out.modules[1]);
        std::swap(out.maps[0], out.maps[1]);
    }
    return out;
}

namespace {

struct Blocks {
    FreeModule sum;
    std::vector<size_t> offsets;
};

Blocks concat_modules(const VarTableP& table, const std::vector<FreeModule>& parts) {
    Blocks b;
    b.sum.table = table;
    for (const FreeModule& m : parts) {
        b.offsets.push_back(b.sum.gen_weights.size());
        for (size_t i = 0; i < m.rank(); ++i) {
            b.sum.gen_weights.push_back(m.gen_weights[i]);
            b.sum.gen_names.push_back(m.name_of(i));
        }
    }
    return b;
}

FreeModule tensor_module(const FreeModule& a, const FreeModule& b) {
    FreeModule out{a.table, {}, {}};
    for (size_t i = 0; i < a.rank(); ++i)
        for (size_t j = 0; j < b.rank(); ++j) {
            out.gen_weights.push_back(a.gen_weights[i] + b.gen_weights[j]);
            out.gen_names.push_back(a.name_of(i) + "." + b.name_of(j));
        }
    return out;
}

FreeModule hom_module(const FreeModule& x, const FreeModule& y) {
    FreeModule out{x.table, {}, {}};
    for (size_t s = 0; s < x.rank(); ++s)
        for (size_t r = 0; r < y.rank(); ++r) {
            out.gen_weights.push_back(y.gen_weights[r] - x.gen_weights[s]);
            out.gen_names.push_back(y.name_of(r) + "<-" + x.name_of(s));
        }
    return out;
}

long common_shift(const std::vector<const ModuleMap*>& maps, const char* what) {
    std::optional<long> shift;
    for (const ModuleMap* f : maps) {
        if (!shift)
            shift = f->shift;
        else
            require(*shift == f->shift, "ShiftMismatch",
                    std::string(what) + " requires all differentials to share one shift");
    }
    return shift.value_or(0);
}

} // namespace

Complex fold_z2(const Complex& cx) {
    require(cx.mode == GradingMode::Z, "ShapeMismatch", "fold applies to integer-graded complexes");
    const VarTableP& table = cx.modules.empty() ? nullptr : cx.modules[0].table;
    require(table != nullptr, "ShapeMismatch", "fold of an empty complex");
    std::vector<FreeModule> parts[2];
    std::vector<size_t> part_index(cx.length());
    for (size_t i = 0; i < cx.length(); ++i) {
        long p = cx.position_of(i);
        size_t eps = ((p % 2) + 2) % 2;
        part_index[i] = parts[eps].size();
        parts[eps].push_back(cx.modules[i]);
    }
    Blocks blk[2] = {concat_modules(table, parts[0]), concat_modules(table, parts[1])};
    std::vector<const ModuleMap*> all;
    for (const ModuleMap& f : cx.maps) all.push_back(&f);
    long shift = common_shift(all, "fold");

    Complex out;
    out.mode = GradingMode::Z2;
    out.modules = {blk[0].sum, blk[1].sum};
    out.maps = {ModuleMap::zero(blk[0].sum, blk[1].sum, shift),
                ModuleMap::zero(blk[1].sum, blk[0].sum, shift)};
    for (size_t i = 0; i < cx.maps.size(); ++i) {
        long p = cx.position_of(i);
        size_t eps = ((p % 2) + 2) % 2;
        ModuleMap& target = out.maps[eps];
        size_t soff = blk[eps].offsets[part_index[i]];
        size_t toff = blk[1 - eps].offsets[part_index[i + 1]];
        for (size_t r = 0; r < cx.modules[i + 1].rank(); ++r)
            for (size_t s = 0; s < cx.modules[i].rank(); ++s)
                target.entries[toff + r][soff + s] = cx.maps[i].entries[r][s];
    }
    return out;
}

Complex tensor_z(const Complex& x, const Complex& y) {
    require(x.mode == GradingMode::Z && y.mode == GradingMode::Z, "ShapeMismatch",
            "integer-graded tensor expects integer-graded factors");
    require(!x.modules.empty() && !y.modules.empty(), "ShapeMismatch", "tensor of empty complex");
    require(*x.modules[0].table == *y.modules[0].table, "MixedAmbient",
            "tensor over different variable tables");
    const VarTableP& table = x.modules[0].table;
    long lenx = (long)x.length(), leny = (long)y.length();
    long lo = x.lo + y.lo, hi = x.lo + lenx - 1 + y.lo + leny - 1;

    // blocks at absolute position r: pairs (ip, iq) ascending in ip
    auto blocks_at = [&](long r) {
        std::vector<std::pair<long, long>> v;
        for (long ip = 0; ip < lenx; ++ip) {
            long iq = r - (x.lo + ip) - y.lo;
            if (iq >= 0 && iq < leny) v.push_back({ip, iq});
        }
        return v;
    };

    std::vector<const ModuleMap*> all;
    for (const ModuleMap& f : x.maps) all.push_back(&f);
    for (const ModuleMap& f : y.maps) all.push_back(&f);
    long shift = common_shift(all, "tensor");

    Complex out;
    out.mode = GradingMode::Z;
    out.lo = lo;
    std::vector<std::map<std::pair<long, long>, size_t>> offsets;
    for (long r = lo; r <= hi; ++r) {
        std::vector<FreeModule> parts;
        std::map<std::pair<long, long>, size_t> off;
        size_t acc = 0;
        for (auto [ip, iq] : blocks_at(r)) {
            FreeModule t = tensor_module(x.modules[ip], y.modules[iq]);
            off[{ip, iq}] = acc;
            acc += t.rank();
            parts.push_back(std::move(t));
        }
        out.modules.push_back(concat_modules(table, parts).sum);
        offsets.push_back(std::move(off));
    }
    for (long r = lo; r < hi; ++r) {
        size_t ri = (size_t)(r - lo);
        ModuleMap d = ModuleMap::zero(out.modules[ri], out.modules[ri + 1], shift);
        for (auto [ip, iq] : blocks_at(r)) {
            size_t soff = offsets[ri].at({ip, iq});
            size_t rx = x.modules[ip].rank(), ry = y.modules[iq].rank();
            if (ip + 1 < lenx) {
                size_t toff = offsets[ri + 1].at({ip + 1, iq});
                const ModuleMap& dx = x.maps[ip];
                size_t rx2 = x.modules[ip + 1].rank();
                for (size_t i2 = 0; i2 < rx2; ++i2)
                    for (size_t i = 0; i < rx; ++i) {
                        if (dx.entries[i2][i].is_zero()) continue;
                        for (size_t j = 0; j < ry; ++j)
                            d.entries[toff + i2 * ry + j][soff + i * ry + j] =
                                d.entries[toff + i2 * ry + j][soff + i * ry + j] +
                                dx.entries[i2][i];
                    }
            }
            if (iq + 1 < leny) {
                size_t toff = offsets[ri + 1].at({ip, iq + 1});
                const ModuleMap& dy = y.maps[iq];
                size_t ry2 = y.modules[iq + 1].rank();
                bool neg = (((x.lo + ip) % 2) + 2) % 2 == 1;
                for (size_t j2 = 0; j2 < ry2; ++j2)
                    for (size_t j = 0; j < ry; ++j) {
                        Poly e = dy.entries[j2][j];
                        if (e.is_zero()) continue;
                        if (neg) e = -e;
                        for (size_t i = 0; i < rx; ++i)
                            d.entries[toff + i * ry2 + j2][soff + i * ry + j] =
                                d.entries[toff + i * ry2 + j2][soff + i * ry + j] + e;
                    }
            }
        }
        out.maps.push_back(std::move(d));
    }
    return out;
}

Complex tensor_z2(const Complex& x, const Complex& y) {
    require(x.mode == GradingMode::Z2 && y.mode == GradingMode::Z2, "ShapeMismatch",
            "two-periodic tensor expects two-periodic factors");
    require(*x.modules[0].table == *y.modules[0].table, "MixedAmbient",
            "tensor over different variable tables");
    const VarTableP& table = x.modules[0].table;
    std::vector<const ModuleMap*> all{&x.maps[0], &x.maps[1], &y.maps[0], &y.maps[1]};
    long shift = common_shift(all, "tensor");

    // even: X0.Y0, X1.Y1 ; odd: X1.Y0, X0.Y1
    std::vector<FreeModule> even_parts{tensor_module(x.modules[0], y.modules[0]),
                                       tensor_module(x.modules[1], y.modules[1])};
    std::vector<FreeModule> odd_parts{tensor_module(x.modules[1], y.modules[0]),
                                      tensor_module(x.modules[0], y.modules[1])};
    Blocks even = concat_modules(table, even_parts);
    Blocks odd = concat_modules(table, odd_parts);

    Complex out;
    out.mode = GradingMode::Z2;
    out.modules = {even.sum, odd.sum};
    out.maps = {ModuleMap::zero(even.sum, odd.sum, shift),
                ModuleMap::zero(odd.sum, even.sum, shift)};

    // block-wise fill: source parity sp with blocks (xe, ye) describing X_{xe} . Y_{ye}
    struct Blk {
        size_t xe, ye, off;
    };
    auto fill = [&](size_t sp, const std::vector<Blk>& src_blocks,
                    const std::vector<Blk>& tgt_blocks) {
        ModuleMap& dmap = out.maps[sp];
        auto find_tgt = [&](size_t xe, size_t ye) -> size_t {
            for (const Blk& b : tgt_blocks)
                if (b.xe == xe && b.ye == ye) return b.off;
            throw Error("ShapeMismatch", "missing tensor block");
        };
        for (const Blk& b : src_blocks) {
            size_t rx = x.modules[b.xe].rank(), ry = y.modules[b.ye].rank();
            // d_X part: X_{xe} -> X_{1-xe}
            {
                const ModuleMap& dx = x.maps[b.xe];
                size_t rx2 = x.modules[1 - b.xe].rank();
                size_t toff = find_tgt(1 - b.xe, b.ye);
                for (size_t i2 = 0; i2 < rx2; ++i2)
                    for (size_t i = 0; i < rx; ++i) {
                        if (dx.entries[i2][i].is_zero()) continue;
                        for (size_t j = 0; j < ry; ++j)
                            dmap.entries[toff + i2 * ry + j][b.off + i * ry + j] =
                                dmap.entries[toff + i2 * ry + j][b.off + i * ry + j] +
                                dx.entries[i2][i];
                    }
            }
            // d_Y part with sign (-1)^{xe}
            {
                const ModuleMap& dy = y.maps[b.ye];
                size_t ry2 = y.modules[1 - b.ye].rank();
                size_t toff = find_tgt(b.xe, 1 - b.ye);
                for (size_t j2 = 0; j2 < ry2; ++j2)
                    for (size_t j = 0; j < ry; ++j) {
                        Poly e = dy.entries[j2][j];
                        if (e.is_zero()) continue;
                        if (b.xe == 1) e = -e;
                        for (size_t i = 0; i < rx; ++i)
                            dmap.entries[toff + i * ry2 + j2][b.off + i * ry + j] =
                                dmap.entries[toff + i * ry2 + j2][b.off + i * ry + j] + e;
                    }
            }
        }
    };
    std::vector<Blk> even_blocks{{0, 0, even.offsets[0]}, {1, 1, even.offsets[1]}};
    std::vector<Blk> odd_blocks{{1, 0, odd.offsets[0]}, {0, 1, odd.offsets[1]}};
    fill(0, even_blocks, odd_blocks);
    fill(1, odd_blocks, even_blocks);
    return out;
}

Complex hom_complex(const Complex& x, const Complex& y) {
    require(x.mode == y.mode, "ShapeMismatch", "hom of complexes with different grading modes");
    require(*x.modules[0].table == *y.modules[0].table, "MixedAmbient",
            "hom over different variable tables");
    const VarTableP& table = x.modules[0].table;
    std::vector<const ModuleMap*> all;
    for (const ModuleMap& f : x.maps) all.push_back(&f);
    for (const ModuleMap& f : y.maps) all.push_back(&f);
    long shift = common_shift(all, "hom");

    if (x.mode == GradingMode::Z2) {
        // even: Hom(X0,Y0), Hom(X1,Y1) ; odd: Hom(X0,Y1), Hom(X1,Y0)
        std::vector<FreeModule> even_parts{hom_module(x.modules[0], y.modules[0]),
                                           hom_module(x.modules[1], y.modules[1])};
        std::vector<FreeModule> odd_parts{hom_module(x.modules[0], y.modules[1]),
                                          hom_module(x.modules[1], y.modules[0])};
        Blocks even = concat_modules(table, even_parts);
        Blocks odd = concat_modules(table, odd_parts);
        Complex out;
        out.mode = GradingMode::Z2;
        out.modules = {even.sum, odd.sum};
        out.maps = {ModuleMap::zero(even.sum, odd.sum, shift),
                    ModuleMap::zero(odd.sum, even.sum, shift)};

        struct Blk {
            size_t xe, ye, off;
        };
        std::vector<Blk> bl[2] = {{{0, 0, even.offsets[0]}, {1, 1, even.offsets[1]}},
                                  {{0, 1, odd.offsets[0]}, {1, 0, odd.offsets[1]}}};
        for (size_t k = 0; k < 2; ++k) {
            ModuleMap& dmap = out.maps[k];
            auto find_tgt = [&](size_t xe, size_t ye) -> size_t {
                for (const Blk& b : bl[1 - k])
                    if (b.xe == xe && b.ye == ye) return b.off;
                throw Error("ShapeMismatch", "missing hom block");
            };
            for (const Blk& b : bl[k]) {
                size_t rx = x.modules[b.xe].rank(), ry = y.modules[b.ye].rank();
                // post-composition d_Y: Y_{ye} -> Y_{1-ye}
                {
                    const ModuleMap& dy = y.maps[b.ye];
                    size_t ry2 = y.modules[1 - b.ye].rank();
                    size_t toff = find_tgt(b.xe, 1 - b.ye);
                    for (size_t s = 0; s < rx; ++s)
                        for (size_t r2 = 0; r2 < ry2; ++r2)
                            for (size_t r = 0; r < ry; ++r) {
                                const Poly& e = dy.entries[r2][r];
                                if (e.is_zero()) continue;
                                dmap.entries[toff + s * ry2 + r2][b.off + s * ry + r] =
                                    dmap.entries[toff + s * ry2 + r2][b.off + s * ry + r] + e;
                            }
                }
                // pre-composition with d_X: X_{1-xe} -> X_{xe}, sign -(-1)^k
                {
                    const ModuleMap& dx = x.maps[1 - b.xe];
                    size_t rx2 = x.modules[1 - b.xe].rank();
                    size_t toff = find_tgt(1 - b.xe, b.ye);
                    for (size_t s = 0; s < rx; ++s)
                        for (size_t s2 = 0; s2 < rx2; ++s2) {
                            Poly e = dx.entries[s][s2];
                            if (e.is_zero()) continue;
                            if (k == 0) e = -e;
                            for (size_t r = 0; r < ry; ++r)
                                dmap.entries[toff + s2 * ry + r][b.off + s * ry + r] =
                                    dmap.entries[toff + s2 * ry + r][b.off + s * ry + r] + e;
                        }
                }
            }
        }
        return out;
    }

    long lenx = (long)x.length(), leny = (long)y.length();
    long klo = y.lo - (x.lo + lenx - 1), khi = (y.lo + leny - 1) - x.lo;
    Complex out;
    out.mode = GradingMode::Z;
    out.lo = klo;
    // blocks at k: pairs (ip, iq) with (y.lo+iq)-(x.lo+ip) = k, ascending ip
    auto blocks_at = [&](long k) {
        std::vector<std::pair<long, long>> v;
        for (long ip = 0; ip < lenx; ++ip) {
            long iq = k + (x.lo + ip) - y.lo;
            if (iq >= 0 && iq < leny) v.push_back({ip, iq});
        }
        return v;
    };
    std::vector<std::map<std::pair<long, long>, size_t>> offsets;
    for (long k = klo; k <= khi; ++k) {
        std::vector<FreeModule> parts;
        std::map<std::pair<long, long>, size_t> off;
        size_t acc = 0;
        for (auto [ip, iq] : blocks_at(k)) {
            FreeModule h = hom_module(x.modules[ip], y.modules[iq]);
            off[{ip, iq}] = acc;
            acc += h.rank();
            parts.push_back(std::move(h));
        }
        out.modules.push_back(concat_modules(table, parts).sum);
        offsets.push_back(std::move(off));
    }
    for (long k = klo; k < khi; ++k) {
        size_t ki = (size_t)(k - klo);
        ModuleMap d = ModuleMap::zero(out.modules[ki], out.modules[ki + 1], shift);
        bool neg = ((k % 2) + 2) % 2 == 0; // -(-1)^k
        for (auto [ip, iq] : blocks_at(k)) {
            size_t soff = offsets[ki].at({ip, iq});
            size_t rx = x.modules[ip].rank(), ry = y.modules[iq].rank();
            if (iq + 1 < leny) { // post-composition
                size_t toff = offsets[ki + 1].at({ip, iq + 1});
                const ModuleMap& dy = y.maps[iq];
                size_t ry2 = y.modules[iq + 1].rank();
                for (size_t s = 0; s < rx; ++s)
                    for (size_t r2 = 0; r2 < ry2; ++r2)
                        for (size_t r = 0; r < ry; ++r) {
                            const Poly& e = dy.entries[r2][r];
                            if (e.is_zero()) continue;
                            d.entries[toff + s * ry2 + r2][soff + s * ry + r] =
                                d.entries[toff + s * ry2 + r2][soff + s * ry + r] + e;
                        }
            }
            if (ip - 1 >= 0) { // pre-composition
                size_t toff = offsets[ki + 1].at({ip - 1, iq});
                const ModuleMap& dx = x.maps[ip - 1];
                size_t rx2 = x.modules[ip - 1].rank();
                for (size_t s = 0; s < rx; ++s)
                    for (size_t s2 = 0; s2 < rx2; ++s2) {
                        Poly e = dx.entries[s][s2];
                        if (e.is_zero()) continue;
                        if (neg) e = -e;
                        for (size_t r = 0; r < ry; ++r)
                            d.entries[toff + s2 * ry + r][soff + s * ry + r] =
                                d.entries[toff + s2 * ry + r][soff + s * ry + r] + e;
                    }
            }
        }
        out.maps.push_back(std::move(d));
    }
    return out;
}

void ChainMap::validate() const {
    require(src.mode == tgt.mode, "ShapeMismatch", "chain map between different grading modes");
    require(src.length() == tgt.length() && parts.size() == src.length(), "ShapeMismatch",
            "chain map parts must align with positions");
    if (src.mode == GradingMode::Z)
        require(src.lo == tgt.lo, "ShapeMismatch", "chain map endpoints start at different positions");
    for (size_t i = 0; i < parts.size(); ++i) {
        require(same_module(parts[i].src, src.modules[i]) &&
                    same_module(parts[i].tgt, tgt.modules[i]),
                "ShapeMismatch", "chain map part endpoints disagree");
        parts[i].validate();
        if (i > 0)
            require(parts[i].shift == parts[0].shift, "ShiftMismatch",
                    "chain map parts must share one shift");
    }
    if (src.mode == GradingMode::Z) {
        for (size_t i = 0; i + 1 < parts.size(); ++i)
            require(compose(tgt.maps[i], parts[i]).equals(compose(parts[i + 1], src.maps[i])),
                    "NotChainMap", "square at position " + std::to_string(src.lo + (long)i) +
                                       " does not commute");
    } else {
        require(compose(tgt.maps[0], parts[0]).equals(compose(parts[1], src.maps[0])) &&
                    compose(tgt.maps[1], parts[1]).equals(compose(parts[0], src.maps[1])),
                "NotChainMap", "squares do not commute");
    }
}

Complex cone(const ChainMap& f) {
    f.validate();
    const Complex& x = f.src;
    const Complex& y = f.tgt;
    const VarTableP& table = y.modules[0].table;
    std::vector<const ModuleMap*> all{};
    for (const ModuleMap& m : x.maps) all.push_back(&m);
    for (const ModuleMap& m : y.maps) all.push_back(&m);
    long dshift = all.empty() ? (f.parts.empty() ? 0 : f.parts[0].shift)
                              : common_shift(all, "cone");
    require(f.parts.empty() || f.parts[0].shift == dshift, "ShiftMismatch",
            "cone requires the chain map shift to match the differential shift");

    if (x.mode == GradingMode::Z2) {
        std::vector<FreeModule> p0{y.modules[0], x.modules[1]};
        std::vector<FreeModule> p1{y.modules[1], x.modules[0]};
        Blocks b0 = concat_modules(table, p0), b1 = concat_modules(table, p1);
        Complex out;
        out.mode = GradingMode::Z2;
        out.modules = {b0.sum, b1.sum};
        out.maps = {ModuleMap::zero(b0.sum, b1.sum, dshift),
                    ModuleMap::zero(b1.sum, b0.sum, dshift)};
        for (size_t eps = 0; eps < 2; ++eps) {
            ModuleMap& d = out.maps[eps];
            const Blocks& sb = eps == 0 ? b0 : b1;
            const Blocks& tb = eps == 0 ? b1 : b0;
            const ModuleMap& dy = y.maps[eps];
            const ModuleMap& dxm = x.maps[1 - eps]; // on the suspended copy, negated
            const ModuleMap& fp = f.parts[1 - eps];
            for (size_t r = 0; r < dy.tgt.rank(); ++r)
                for (size_t s = 0; s < dy.src.rank(); ++s)
                    d.entries[tb.offsets[0] + r][sb.offsets[0] + s] = dy.entries[r][s];
            for (size_t r = 0; r < fp.tgt.rank(); ++r)
                for (size_t s = 0; s < fp.src.rank(); ++s)
                    d.entries[tb.offsets[0] + r][sb.offsets[1] + s] = fp.entries[r][s];
            for (size_t r = 0; r < dxm.tgt.rank(); ++r)
                for (size_t s = 0; s < dxm.src.rank(); ++s)
                    d.entries[tb.offsets[1] + r][sb.offsets[1] + s] = -dxm.entries[r][s];
        }
        return out;
    }

    long L = (long)x.length();
    Complex out;
    out.mode = GradingMode::Z;
    out.lo = x.lo - 1;
    std::vector<Blocks> blocks;
    for (long p = out.lo; p <= x.lo + L - 1; ++p) {
        std::vector<FreeModule> parts;
        if (p >= y.lo && p <= y.lo + L - 1) parts.push_back(y.modules[p - y.lo]);
        if (p + 1 >= x.lo && p + 1 <= x.lo + L - 1) parts.push_back(x.modules[p + 1 - x.lo]);
        blocks.push_back(concat_modules(table, parts));
        out.modules.push_back(blocks.back().sum);
    }
    for (long p = out.lo; p < x.lo + L - 1; ++p) {
        size_t pi = (size_t)(p - out.lo);
        ModuleMap d = ModuleMap::zero(out.modules[pi], out.modules[pi + 1], dshift);
        bool sy = p >= y.lo;                 // source has a Y block (first block)
        size_t sxoff = sy ? blocks[pi].offsets[1] : blocks[pi].offsets[0];
        bool ty = true;                      // target position p+1 >= y.lo always here
        size_t tyoff = blocks[pi + 1].offsets[0];
        bool tx = p + 2 <= x.lo + L - 1;     // target has a suspended X block
        if (sy) {
            const ModuleMap& dy = y.maps[p - y.lo];
            for (size_t r = 0; r < dy.tgt.rank(); ++r)
                for (size_t s = 0; s < dy.src.rank(); ++s)
                    d.entries[tyoff + r][blocks[pi].offsets[0] + s] = dy.entries[r][s];
        }
        {
            const ModuleMap& fp = f.parts[p + 1 - x.lo];
            for (size_t r = 0; r < fp.tgt.rank(); ++r)
                for (size_t s = 0; s < fp.src.rank(); ++s)
                    d.entries[tyoff + r][sxoff + s] = fp.entries[r][s];
        }
        if (tx) {
            size_t txoff = blocks[pi + 1].offsets[ty ? 1 : 0];
            const ModuleMap& dx = x.maps[p + 1 - x.lo];
            for (size_t r = 0; r < dx.tgt.rank(); ++r)
                for (size_t s = 0; s < dx.src.rank(); ++s)
                    d.entries[txoff + r][sxoff + s] = -dx.entries[r][s];
        }
        out.maps.push_back(std::move(d));
    }
    return out;
}

CohTable cohomology_window(const Complex& cx, long weight_lo, long weight_hi) {
    CohTable table;
    table.mode = cx.mode;
    std::map<std::pair<size_t, long>, SliceBasis> slices;
    auto slice = [&](size_t i, long w) -> const SliceBasis& {
        auto key = std::make_pair(i, w);
        auto it = slices.find(key);
        if (it == slices.end()) it = slices.emplace(key, module_slice(cx.modules[i], w)).first;
        return it->second;
    };
    auto rank_at = [&](const ModuleMap& f, size_t si, size_t ti, long src_w) -> long {
        const SliceBasis& sb = slice(si, src_w);
        const SliceBasis& tb = slice(ti, src_w + f.shift);
        if (sb.elems.empty()) return 0;
        return rank(slice_matrix(f, src_w, sb, tb));
    };

    for (size_t i = 0; i < cx.length(); ++i) {
        const ModuleMap* out = nullptr;
        const ModuleMap* in = nullptr;
        size_t out_tgt = 0, in_src = 0;
        if (cx.mode == GradingMode::Z) {
            if (i + 1 < cx.length()) {
                out = &cx.maps[i];
                out_tgt = i + 1;
            }
            if (i > 0) {
                in = &cx.maps[i - 1];
                in_src = i - 1;
            }
        } else {
            out = &cx.maps[i];
            out_tgt = 1 - i;
            in = &cx.maps[1 - i];
            in_src = 1 - i;
        }
        for (long m = weight_lo; m <= weight_hi; ++m) {
            long dim_slice = (long)slice(i, m).elems.size();
            if (dim_slice == 0) continue;
            long ker = dim_slice - (out ? rank_at(*out, i, out_tgt, m) : 0);
            long im = in ? rank_at(*in, in_src, i, m - in->shift) : 0;
            long h = ker - im;
            if (h != 0) table.dims[{cx.position_of(i), m}] = h;
        }
    }
    return table;
}

std::string to_csv(const CohTable& table) {
    std::ostringstream os;
    os << "position,weight,dim\n";
    for (const auto& [key, dim] : table.dims)
        os << key.first << "," << key.second << "," << dim << "\n";
    return os.str();
}

std::vector<Monomial> bounded_monomials(const VarTableP& table, long weight, long degree_bound) {
    std::vector<Monomial> out;
    size_t n = table->size();
    Monomial cur(n, 0);
    std::function<void(size_t, long, long)> rec = [&](size_t i, long rem_weight, long budget) {
        if (i == n) {
            if (rem_weight == 0) out.push_back(cur);
            return;
        }
        const VarInfo& v = table->var(i);
        long lo = v.laurent ? -budget : 0;
        for (long e = lo; e <= budget; ++e) {
            cur[i] = (int)e;
            rec(i + 1, rem_weight - e * v.weight, budget - std::abs(e));
        }
        cur[i] = 0;
    };
    rec(0, weight, degree_bound);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::pair<ModuleMap, ModuleMap>>
find_null_homotopy(const ModuleMap& d0, const ModuleMap& d1,
                   const ModuleMap& tau0, const ModuleMap& tau1, long degree_bound) {
    const VarTableP& table = d0.src.table;
    const Field& field = table->field();
    require(d0.shift == d1.shift && tau0.shift == tau1.shift, "ShiftMismatch",
            "homotopy search requires uniform shifts");
    long hshift = tau0.shift - d0.shift;
    const FreeModule& m0 = d0.src;
    const FreeModule& m1 = d1.src;

    // unknowns: (side, r, s, monomial)
    struct Unknown {
        int side;
        size_t r, s;
        Monomial mono;
    };
    std::vector<Unknown> unknowns;
    std::map<std::tuple<int, size_t, size_t, Monomial>, size_t> uindex;
    auto gather = [&](int side, const FreeModule& src, const FreeModule& tgt) {
        for (size_t r = 0; r < tgt.rank(); ++r)
            for (size_t s = 0; s < src.rank(); ++s) {
                long w = src.gen_weights[s] - tgt.gen_weights[r] + hshift;
                for (const Monomial& mono : bounded_monomials(table, w, degree_bound)) {
                    uindex[{side, r, s, mono}] = unknowns.size();
                    unknowns.push_back({side, r, s, mono});
                }
            }
    };
    gather(0, m0, m1); // h0: M0 -> M1
    gather(1, m1, m0); // h1: M1 -> M0

    std::map<std::tuple<int, size_t, size_t, Monomial>, size_t> rindex;
    std::vector<std::map<size_t, Scalar>> rows;
    std::vector<Scalar> rhs;
    auto row_of = [&](int eq, size_t r, size_t s, const Monomial& mono) -> size_t {
        auto key = std::make_tuple(eq, r, s, mono);
        auto it = rindex.find(key);
        if (it != rindex.end()) return it->second;
        size_t idx = rows.size();
        rindex[key] = idx;
        rows.push_back({});
        rhs.push_back(Scalar::zero(field));
        return idx;
    };
    auto add_lhs = [&](int eq, size_t r, size_t s, const Poly& p, size_t u) {
        for (const auto& [mono, c] : p.terms()) {
            size_t row = row_of(eq, r, s, mono);
            auto it = rows[row].find(u);
            if (it == rows[row].end())
                rows[row][u] = c;
            else
                it->second = it->second + c;
        }
    };

    // eq 0 on M0: d1 h0 + h1 d0 = tau0 ; eq 1 on M1: d0 h1 + h0 d1 = tau1
    for (size_t u = 0; u < unknowns.size(); ++u) {
        const Unknown& uk = unknowns[u];
        Poly mu = mono_poly(table, uk.mono);
        if (uk.side == 0) {
            // d1[r'][uk.r] * mu contributes to eq0 entry (r', uk.s)
            for (size_t r2 = 0; r2 < m0.rank(); ++r2)
                if (!d1.entries[r2][uk.r].is_zero())
                    add_lhs(0, r2, uk.s, d1.entries[r2][uk.r] * mu, u);
            // mu * d1[uk.s][s'] contributes to eq1 entry (uk.r, s')
            for (size_t s2 = 0; s2 < m1.rank(); ++s2)
                if (!d1.entries[uk.s][s2].is_zero())
                    add_lhs(1, uk.r, s2, mu * d1.entries[uk.s][s2], u);
        } else {
            for (size_t r2 = 0; r2 < m1.rank(); ++r2)
                if (!d0.entries[r2][uk.r].is_zero())
                    add_lhs(1, r2, uk.s, d0.entries[r2][uk.r] * mu, u);
            for (size_t s2 = 0; s2 < m0.rank(); ++s2)
                if (!d0.entries[uk.s][s2].is_zero())
                    add_lhs(0, uk.r, s2, mu * d0.entries[uk.s][s2], u);
        }
    }
    auto add_rhs = [&](int eq, const ModuleMap& tau) {
        for (size_t r = 0; r < tau.tgt.rank(); ++r)
            for (size_t s = 0; s < tau.src.rank(); ++s)
                for (const auto& [mono, c] : tau.entries[r][s].terms()) {
                    size_t row = row_of(eq, r, s, mono);
                    rhs[row] = rhs[row] + c;
                }
    };
    add_rhs(0, tau0);
    add_rhs(1, tau1);

    ScalarMatrix mat(rows.size(), unknowns.size(), field);
    for (size_t i = 0; i < rows.size(); ++i)
        for (const auto& [u, c] : rows[i]) mat.at(i, u) = c;
    auto sol = solve(mat, rhs);
    if (!sol) return std::nullopt;

    ModuleMap h0 = ModuleMap::zero(m0, m1, hshift);
    ModuleMap h1 = ModuleMap::zero(m1, m0, hshift);
    for (size_t u = 0; u < unknowns.size(); ++u) {
        if ((*sol)[u].is_zero()) continue;
        const Unknown& uk = unknowns[u];
        ModuleMap& h = uk.side == 0 ? h0 : h1;
        h.entries[uk.r][uk.s].add_term(uk.mono, (*sol)[u]);
    }
    return std::make_pair(h0, h1);
}

} // namespace cdg
