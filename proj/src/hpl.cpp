#include "hcm/hpl.hpp"

#include "hcm/errors.hpp"

#include <algorithm>
#include <set>

namespace hcm {

namespace {

int koszul(long a) { return (a & 1) ? -1 : 1; }

SparseVector unit(std::size_t i) { return SparseVector({{i, Rational(1)}}); }

SparseVector shift(const SparseVector& v, std::size_t offset) {
    std::vector<SparseVector::Entry> e;
    for (const auto& [i, c] : v.entries()) e.emplace_back(i + offset, c);
    return SparseVector(std::move(e));
}

SparseVector combine(const std::vector<Rational>& coords, std::size_t begin, std::size_t end,
                     const std::vector<std::size_t>& to) {
    std::vector<SparseVector::Entry> e;
    for (std::size_t a = begin; a < end && a < coords.size(); ++a)
        if (coords[a] != 0) e.emplace_back(to.at(a - begin), coords[a]);
    return SparseVector(std::move(e));
}

bool same_complex(const ChainComplex& a, const ChainComplex& b) {
    return a.degrees == b.degrees && a.differential == b.differential;
}

// Expansion of every non-generator basis element as sum c [generator, lower element].
struct BracketTerm {
    Rational coeff;
    std::size_t generator;  // position in the generator list
    std::size_t element;    // basis index
};
struct Expansions {
    std::vector<long> generator_slot;  // -1 for non-generators
    std::vector<std::vector<BracketTerm>> terms;
    std::vector<std::size_t> order;  // basis sorted by degree
};

Expansions bracket_expansions(const DgLie& lie, const std::vector<std::size_t>& generators) {
    const std::size_t n = lie.size();
    Expansions out;
    out.generator_slot.assign(n, -1);
    out.terms.resize(n);
    for (std::size_t a = 0; a < generators.size(); ++a) {
        if (generators[a] >= n) throw ValidationError("generator index out of range");
        out.generator_slot[generators[a]] = long(a);
    }
    std::set<int> degrees(lie.degrees().begin(), lie.degrees().end());
    for (int deg : degrees) {
        SubspaceBasis span;
        std::vector<std::pair<std::size_t, std::size_t>> accepted;
        for (std::size_t a = 0; a < generators.size(); ++a) {
            const std::size_t v = generators[a];
            for (std::size_t j : lie.basis_of_degree(deg - lie.degree(v)))
                if (span.add(lie.bracket(v, j))) accepted.emplace_back(a, j);
        }
        for (std::size_t b : lie.basis_of_degree(deg)) {
            out.order.push_back(b);
            if (out.generator_slot[b] >= 0) continue;
            if (!span.contains(unit(b)))
                throw ValidationError("basis element " + lie.name(b) +
                                      " is not generated by the given generators");
            const std::vector<Rational> coords = span.coordinates(unit(b));
            for (std::size_t c = 0; c < coords.size(); ++c)
                if (coords[c] != 0)
                    out.terms[b].push_back({coords[c], accepted[c].first, accepted[c].second});
        }
    }
    return out;
}

// Extension of theta (values on generators, degree k) to a derivation along `along`.
std::vector<SparseVector> extend_derivation(const DgLie& source, const Expansions& ex,
                                            const std::vector<std::size_t>& generators,
                                            const DgLie& target,
                                            const std::vector<SparseVector>& along,
                                            const std::vector<SparseVector>& values, int k) {
    std::vector<SparseVector> out(source.size());
    for (std::size_t b : ex.order) {
        if (ex.generator_slot[b] >= 0) {
            out[b] = values[std::size_t(ex.generator_slot[b])];
            continue;
        }
        SparseVector acc;
        for (const auto& t : ex.terms[b]) {
            const std::size_t v = generators[t.generator];
            acc += t.coeff * target.bracket(values[t.generator], along[t.element]);
            acc += Rational(t.coeff * koszul(long(k) * source.degree(v))) *
                   target.bracket(along[v], out[t.element]);
        }
        out[b] = std::move(acc);
    }
    return out;
}

SparseVector apply_columns(const std::vector<SparseVector>& cols, const SparseVector& v) {
    SparseVector out;
    for (const auto& [i, c] : v.entries()) out += c * cols[i];
    return out;
}

// Sum of powers of a nilpotent matrix; throws once more than `bound` terms are nonzero.
std::pair<SparseMatrix, std::size_t> geometric_series(const SparseMatrix& step, std::size_t bound) {
    SparseMatrix sum = SparseMatrix::identity(step.rows());
    SparseMatrix power = sum;
    std::size_t terms = 0;
    while (true) {
        power = power * step;
        if (power.is_zero()) break;
        if (++terms > bound)
            throw DivergenceError("perturbation series did not terminate within " +
                                  std::to_string(bound) + " iterations");
        sum = sum + power;
    }
    return {std::move(sum), terms};
}

}  // namespace

// ---------------------------------------------------------------- chain complexes

std::vector<int> ChainComplex::distinct_degrees() const {
    std::set<int> s(degrees.begin(), degrees.end());
    return {s.begin(), s.end()};
}

std::vector<std::size_t> ChainComplex::basis_of_degree(int degree) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < degrees.size(); ++i)
        if (degrees[i] == degree) out.push_back(i);
    return out;
}

bool is_homogeneous(const SparseMatrix& m, const std::vector<int>& source,
                    const std::vector<int>& target, int shift) {
    if (m.rows() != target.size() || m.cols() != source.size()) return false;
    for (const auto& t : m.triplets())
        if (target[t.row] != source[t.col] + shift) return false;
    return true;
}

void ChainComplex::validate() const {
    if (differential.rows() != size() || differential.cols() != size())
        throw ValidationError("differential has the wrong shape");
    if (!is_homogeneous(differential, degrees, degrees, -1))
        throw ValidationError("differential must have degree -1");
    if (!(differential * differential).is_zero()) throw ValidationError("d^2 != 0");
}

std::vector<std::pair<int, std::size_t>> ChainComplex::homology_dims() const {
    std::vector<std::pair<int, std::size_t>> out;
    const auto cols = differential.columns();
    for (int deg : distinct_degrees()) {
        std::vector<SparseVector> out_cols, in_cols;
        for (std::size_t i : basis_of_degree(deg)) out_cols.push_back(cols[i]);
        for (std::size_t i : basis_of_degree(deg + 1)) in_cols.push_back(cols[i]);
        const std::size_t r_out = column_rank_kernel(out_cols).rank;
        const std::size_t r_in = column_rank_kernel(in_cols).rank;
        out.emplace_back(deg, out_cols.size() - r_out - r_in);
    }
    return out;
}

ChainComplex chain_complex(const DgLie& lie) {
    std::vector<SparseVector> cols;
    for (std::size_t i = 0; i < lie.size(); ++i) cols.push_back(lie.differential(i));
    return {lie.degrees(), SparseMatrix::from_columns(lie.size(), cols)};
}

// ---------------------------------------------------------------- splittings

SplitData split_complex(const ChainComplex& c) {
    c.validate();
    const std::size_t n = c.size();
    const auto dcols = c.differential.columns();
    std::vector<SparseVector> scols(n);
    for (int deg : c.distinct_degrees()) {
        const auto target = c.basis_of_degree(deg - 1);
        if (target.empty()) continue;
        SubspaceBasis span;
        std::vector<std::size_t> preimage;
        for (std::size_t j : c.basis_of_degree(deg))
            if (span.add(dcols[j])) preimage.push_back(j);
        for (std::size_t k : target) span.add(unit(k));
        for (std::size_t k : target)
            scols[k] = combine(span.coordinates(unit(k)), 0, preimage.size(), preimage);
    }
    return {c, SparseMatrix::from_columns(n, scols)};
}

std::vector<std::string> Contraction::violations() const {
    std::vector<std::string> out;
    const std::size_t nb = big.size();
    const std::size_t ns = small.size();
    const SparseMatrix& d = big.differential;
    const SparseMatrix& ds = small.differential;
    if (!is_homogeneous(f, big.degrees, small.degrees, 0)) out.emplace_back("f degree");
    if (!is_homogeneous(g, small.degrees, big.degrees, 0)) out.emplace_back("g degree");
    if (!is_homogeneous(h, big.degrees, big.degrees, 1)) out.emplace_back("h degree");
    if (!out.empty()) return out;
    if (!(d * d).is_zero()) out.emplace_back("big d^2");
    if (!(ds * ds).is_zero()) out.emplace_back("small d^2");
    if (ds * f != f * d) out.emplace_back("f chain map");
    if (d * g != g * ds) out.emplace_back("g chain map");
    if (f * g != SparseMatrix::identity(ns)) out.emplace_back("fg = 1");
    if (SparseMatrix::identity(nb) - g * f != d * h + h * d) out.emplace_back("1 - gf = dh + hd");
    return out;
}

std::vector<std::string> Contraction::side_condition_violations() const {
    std::vector<std::string> out;
    if (!(f * h).is_zero()) out.emplace_back("fh = 0");
    if (!(h * g).is_zero()) out.emplace_back("hg = 0");
    if (!(h * h).is_zero()) out.emplace_back("hh = 0");
    return out;
}

Contraction contraction_from_split(const SplitData& sd) {
    const ChainComplex& c = sd.complex;
    c.validate();
    const SparseMatrix& d = c.differential;
    const SparseMatrix& s = sd.splitting;
    if (!is_homogeneous(s, c.degrees, c.degrees, 1)) throw ValidationError("s must have degree +1");
    if (d * s * d != d) throw ValidationError("splitting violates d s d = d");
    const std::size_t n = c.size();
    const auto dcols = d.columns();

    std::vector<SparseVector> reps;
    std::vector<int> small_degrees;
    std::vector<SparseVector> pcols(n);
    for (int deg : c.distinct_degrees()) {
        SubspaceBasis span;
        std::size_t boundaries = 0;
        for (std::size_t j : c.basis_of_degree(deg + 1))
            if (span.add(dcols[j])) ++boundaries;
        std::vector<std::size_t> slots;
        for (std::size_t i : c.basis_of_degree(deg)) {
            SparseVector z = unit(i) - s.apply(dcols[i]);
            if (span.add(z)) {
                slots.push_back(reps.size());
                reps.push_back(std::move(z));
                small_degrees.push_back(deg);
            }
        }
        for (std::size_t i : c.basis_of_degree(deg)) {
            const SparseVector z = unit(i) - s.apply(dcols[i]);
            pcols[i] = combine(span.coordinates(z), boundaries, boundaries + slots.size(), slots);
        }
    }
    const std::size_t m = reps.size();
    std::vector<SparseVector> gcols;
    for (const auto& z : reps) gcols.push_back(z - d.apply(s.apply(z)));

    Contraction out;
    out.big = c;
    out.small = {small_degrees, SparseMatrix(m, m)};
    out.f = SparseMatrix::from_columns(m, pcols);
    out.g = SparseMatrix::from_columns(n, gcols);
    out.h = s - s * s * d;
    return out;
}

Contraction contraction_from_surjection(const ChainComplex& big, const ChainComplex& small,
                                        const SparseMatrix& f) {
    big.validate();
    small.validate();
    if (!is_homogeneous(f, big.degrees, small.degrees, 0))
        throw ValidationError("f must be a degree-0 map between the given complexes");
    if (small.differential * f != f * big.differential) throw ValidationError("f is not a chain map");
    const std::size_t n = big.size();
    const auto fcols = f.columns();

    // Kernel of f degree by degree, and a linear section.
    std::vector<SparseVector> kernel;
    std::vector<int> kernel_degrees;
    std::vector<SparseVector> section(small.size());
    for (int deg : big.distinct_degrees()) {
        const auto idx = big.basis_of_degree(deg);
        std::vector<SparseVector> cols;
        for (std::size_t i : idx) cols.push_back(fcols[i]);
        const RankKernel rk = column_rank_kernel(cols);
        for (const auto& kv : rk.kernel_basis) {
            std::vector<SparseVector::Entry> e;
            for (const auto& [pos, c] : kv.entries()) e.emplace_back(idx[pos], c);
            kernel.emplace_back(std::move(e));
            kernel_degrees.push_back(deg);
        }
    }
    for (int deg : small.distinct_degrees()) {
        const auto idx = big.basis_of_degree(deg);
        SubspaceBasis span;
        std::vector<std::size_t> chosen;
        for (std::size_t i : idx)
            if (span.add(fcols[i])) chosen.push_back(i);
        for (std::size_t y : small.basis_of_degree(deg)) {
            if (!span.contains(unit(y))) throw ValidationError("f is not surjective");
            section[y] = combine(span.coordinates(unit(y)), 0, chosen.size(), chosen);
        }
    }

    // The kernel as a complex in its own coordinates, contracted onto zero.
    SubspaceBasis kspan;
    for (const auto& kv : kernel) kspan.add(kv);
    auto kcoords = [&](const SparseVector& v) {
        std::vector<std::size_t> ident(kernel.size());
        for (std::size_t a = 0; a < ident.size(); ++a) ident[a] = a;
        return combine(kspan.coordinates(v), 0, kernel.size(), ident);
    };
    std::vector<SparseVector> kd;
    for (const auto& kv : kernel) kd.push_back(kcoords(big.differential.apply(kv)));
    const ChainComplex kc{kernel_degrees, SparseMatrix::from_columns(kernel.size(), kd)};
    const Contraction kcon = contraction_from_split(split_complex(kc));
    if (kcon.small.size() != 0) throw ValidationError("f is not a quasi-isomorphism");
    auto kernel_h = [&](const SparseVector& v) {
        return apply_columns(kernel, kcon.h.apply(kcoords(v)));
    };

    std::vector<SparseVector> gcols;
    for (std::size_t y = 0; y < small.size(); ++y) {
        const SparseVector err = big.differential.apply(section[y]) -
                                 apply_columns(section, small.differential.apply(unit(y)));
        gcols.push_back(section[y] - kernel_h(err));
    }
    Contraction out;
    out.big = big;
    out.small = small;
    out.f = f;
    out.g = SparseMatrix::from_columns(n, gcols);
    const SparseMatrix gf = out.g * f;
    std::vector<SparseVector> hcols;
    for (std::size_t i = 0; i < n; ++i) hcols.push_back(kernel_h(unit(i) - gf.apply(unit(i))));
    out.h = SparseMatrix::from_columns(n, hcols);
    return out;
}

Contraction normalize_side_conditions(const Contraction& c) {
    const SparseMatrix& d = c.big.differential;
    const SparseMatrix proj = SparseMatrix::identity(c.big.size()) - c.g * c.f;
    const SparseMatrix h1 = proj * c.h * proj;
    Contraction out = c;
    out.h = h1 * d * h1;
    out.side_conditions_normalized = true;
    return out;
}

HomotopySquare homotopy_square(const SplitData& source, const SplitData& target,
                               const SparseMatrix& map) {
    const Contraction cs = contraction_from_split(source);
    const Contraction ct = contraction_from_split(target);
    const ChainComplex& c = source.complex;
    const ChainComplex& d = target.complex;
    if (!is_homogeneous(map, c.degrees, d.degrees, 0))
        throw ValidationError("map must have degree 0");
    if (d.differential * map != map * c.differential) throw ValidationError("map is not a chain map");
    HomotopySquare out;
    out.induced = ct.f * map * cs.g;
    const SparseMatrix defect = out.induced * cs.f - ct.f * map;
    const SparseMatrix dt = c.differential.transpose();
    std::vector<SparseVector> rows;
    for (std::size_t r = 0; r < defect.rows(); ++r) {
        SparseVector x;
        if (!solve_right(dt, defect.row(r), x))
            throw ValidationError("no homotopy exists; complexes or map are inconsistent");
        std::vector<SparseVector::Entry> e;
        for (const auto& [col, v] : x.entries())
            if (c.degrees[col] + 1 == ct.small.degrees[r]) e.emplace_back(col, v);
        rows.emplace_back(std::move(e));
    }
    out.homotopy = SparseMatrix::from_rows(c.size(), rows);
    return out;
}

// ---------------------------------------------------------------- perturbation

PerturbedContraction bpl(const Contraction& c, const SparseMatrix& t,
                         std::optional<std::size_t> max_iterations) {
    if (auto v = c.violations(); !v.empty())
        throw ValidationError("input is not a contraction: " + v.front());
    if (auto v = c.side_condition_violations(); !v.empty())
        throw ValidationError("input lacks side condition " + v.front() +
                              "; normalize_side_conditions first");
    if (!is_homogeneous(t, c.big.degrees, c.big.degrees, -1))
        throw ValidationError("perturbation must have degree -1");
    const SparseMatrix dt = c.big.differential + t;
    if (!(dt * dt).is_zero()) throw ValidationError("perturbed differential does not square to zero");

    std::size_t bound = 1;
    if (max_iterations) {
        bound = *max_iterations;
    } else if (c.big.size() > 0) {
        const auto [lo, hi] = std::minmax_element(c.big.degrees.begin(), c.big.degrees.end());
        bound = std::size_t(*hi - *lo + 1);
    }
    const auto [x, nx] = geometric_series(Rational(-1) * (t * c.h), bound);
    const auto [y, ny] = geometric_series(Rational(-1) * (c.h * t), bound);

    PerturbedContraction out;
    Contraction& r = out.contraction;
    r.big = {c.big.degrees, dt};
    r.f = c.f * x;
    r.g = y * c.g;
    r.h = c.h * x;
    out.small_perturbation = r.f * t * c.g;
    r.small = {c.small.degrees, c.small.differential + out.small_perturbation};
    r.side_conditions_normalized = c.side_conditions_normalized;
    out.iterations = std::max(nx, ny);
    if (auto v = r.violations(); !v.empty())
        throw DivergenceError("perturbed data is not a contraction: " + v.front());
    return out;
}

// ---------------------------------------------------------------- Lie structure

SparseMatrix extend_morphism(const DgLie& source, const std::vector<std::size_t>& generators,
                             const DgLie& target, const std::vector<SparseVector>& images) {
    if (images.size() != generators.size())
        throw ValidationError("one image per generator required");
    const Expansions ex = bracket_expansions(source, generators);
    std::vector<SparseVector> cols(source.size());
    for (std::size_t b : ex.order) {
        if (ex.generator_slot[b] >= 0) {
            cols[b] = images[std::size_t(ex.generator_slot[b])];
            continue;
        }
        SparseVector acc;
        for (const auto& t : ex.terms[b])
            acc += t.coeff * target.bracket(images[t.generator], cols[t.element]);
        cols[b] = std::move(acc);
    }
    return SparseMatrix::from_columns(target.size(), cols);
}

bool is_lie_morphism(const DgLie& source, const DgLie& target, const SparseMatrix& map) {
    if (!is_homogeneous(map, source.degrees(), target.degrees(), 0)) return false;
    const auto cols = map.columns();
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (map.apply(source.differential(i)) != target.differential(cols[i])) return false;
        for (std::size_t j = i; j < source.size(); ++j)
            if (map.apply(source.bracket(i, j)) != target.bracket(cols[i], cols[j])) return false;
    }
    return true;
}

DerivationPerturbation derivation_perturbation(const DgLie& model,
                                               const std::vector<std::size_t>& generators,
                                               const DgLie& target, const Contraction& c) {
    if (!same_complex(c.big, chain_complex(model)) || !same_complex(c.small, chain_complex(target)))
        throw ValidationError("contraction does not match the model and target");
    if (!is_lie_morphism(model, target, c.f)) throw ValidationError("f is not a dg Lie morphism");
    if (auto top = model.truncation_degree())
        for (std::size_t v : generators)
            if (model.degree(v) - 1 >= *top)
                throw ValidationError("generator differentials must lie below the truncation degree");
    const std::size_t nm = model.size();
    const std::size_t nt = target.size();
    const std::size_t nv = generators.size();
    const Expansions ex = bracket_expansions(model, generators);

    auto layout = [&](const DgLie& lie) {
        std::vector<int> deg;
        for (std::size_t i = 0; i < lie.size(); ++i) deg.push_back(lie.degree(i) + 1);
        for (std::size_t v : generators)
            for (std::size_t j = 0; j < lie.size(); ++j) deg.push_back(lie.degree(j) - model.degree(v));
        return deg;
    };
    const std::vector<int> big_deg = layout(model);
    const std::vector<int> small_deg = layout(target);

    // Column builders: s-part handled by `on_s`, Hom-part by `on_hom` (per value).
    auto hom_map = [&](std::size_t from_size, std::size_t to_size, const SparseMatrix& m,
                       const Rational& s_sign) {
        std::vector<SparseVector> cols;
        for (std::size_t i = 0; i < from_size; ++i) cols.push_back(s_sign * m.apply(unit(i)));
        for (std::size_t a = 0; a < nv; ++a)
            for (std::size_t j = 0; j < from_size; ++j)
                cols.push_back(shift(m.apply(unit(j)), to_size + a * to_size));
        return SparseMatrix::from_columns(to_size + nv * to_size, cols);
    };

    std::vector<SparseVector> id_cols, f_cols;
    for (std::size_t i = 0; i < nm; ++i) id_cols.push_back(unit(i));
    f_cols = c.f.columns();

    // t(theta) = -(-1)^k (v -> theta(d v)), theta extended along `along`.
    auto perturbation = [&](const DgLie& lie, const std::vector<SparseVector>& along) {
        const std::size_t n = lie.size();
        std::vector<SparseVector> cols;
        for (std::size_t i = 0; i < n; ++i) {
            SparseVector col;
            for (std::size_t a = 0; a < nv; ++a)
                col += shift(lie.bracket(unit(i), along[generators[a]]), n + a * n);
            cols.push_back(std::move(col));
        }
        for (std::size_t a = 0; a < nv; ++a)
            for (std::size_t j = 0; j < n; ++j) {
                const int k = lie.degree(j) - model.degree(generators[a]);
                std::vector<SparseVector> values(nv);
                values[a] = unit(j);
                const auto ext = extend_derivation(model, ex, generators, lie, along, values, k);
                SparseVector col;
                for (std::size_t u = 0; u < nv; ++u)
                    col += shift(apply_columns(ext, model.differential(generators[u])), n + u * n);
                cols.push_back(Rational(-koszul(k)) * col);
            }
        return SparseMatrix::from_columns(n + nv * n, cols);
    };

    DerivationPerturbation out;
    Contraction& r = out.contraction;
    r.big = {big_deg, hom_map(nm, nm, c.big.differential, Rational(-1))};
    r.small = {small_deg, hom_map(nt, nt, c.small.differential, Rational(-1))};
    r.f = hom_map(nm, nt, c.f, Rational(1));
    r.g = hom_map(nt, nm, c.g, Rational(1));
    r.h = hom_map(nm, nm, c.h, Rational(-1));
    r.side_conditions_normalized = c.side_conditions_normalized;
    out.big_perturbation = perturbation(model, id_cols);
    out.small_perturbation = perturbation(target, f_cols);
    return out;
}

AttachingModel attaching_model(const QuadraticModule& q, int max_degree) {
    const int d = q.d();
    const std::size_t n = q.rank();
    if (max_degree < 2 * d - 1)
        throw ValidationError("truncation must include the degree of gamma");
    std::vector<std::string> names = q.names();
    for (const auto& extra : {"rho", "gamma"})
        if (std::find(names.begin(), names.end(), extra) != names.end())
            throw ValidationError(std::string("generator name clash with ") + extra);
    std::vector<int> degrees(n, d - 1);
    names.emplace_back("rho");
    degrees.push_back(2 * d - 2);
    names.emplace_back("gamma");
    degrees.push_back(2 * d - 1);
    const GeneratorSet gens(names, degrees);
    const auto alg = FreeLieAlgebra::create(gens);

    LieElement twice_omega(alg);
    const SparseMatrix dual = q.dual_gram();
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, c] : dual.row(i).entries())
            twice_omega += c * bracket(LieElement::generator(alg, i), LieElement::generator(alg, j));
    std::vector<LieElement> diff(n + 2, LieElement(alg));
    diff[n + 1] = Rational(1, 2) * twice_omega - LieElement::generator(alg, n);

    AttachingModel out;
    out.model = DgLie::free_truncated(gens, max_degree, diff);
    out.target = DgLie::free_truncated(GeneratorSet(q.names(), std::vector<int>(n, d - 1)), max_degree);
    auto index_in = [](const DgLie& lie, const std::string& name) {
        const auto& nm = lie.names();
        const auto it = std::find(nm.begin(), nm.end(), name);
        if (it == nm.end()) throw ValidationError("generator " + name + " missing from model");
        return std::size_t(it - nm.begin());
    };
    std::vector<SparseVector> images;
    for (std::size_t i = 0; i < n + 2; ++i) {
        out.generators.push_back(index_in(out.model, names[i]));
        images.push_back(i < n ? unit(index_in(out.target, names[i])) : SparseVector());
    }
    // rho goes to omega = d(gamma) + rho, which involves only the alpha generators.
    const SparseMatrix partial = extend_morphism(out.model, out.generators, out.target, images);
    const std::size_t rho = out.generators[n];
    const std::size_t gamma = out.generators[n + 1];
    images[n] = partial.apply(out.model.differential(gamma) + unit(rho));
    out.projection = extend_morphism(out.model, out.generators, out.target, images);
    return out;
}

// ---------------------------------------------------------------- L-infinity transfer

LinftyMorphism linfty_transfer(const DgLie& big, const DgLie& small, const Contraction& c,
                               int max_arity) {
    if (max_arity != 2 && max_arity != 3) throw ValidationError("max_arity must be 2 or 3");
    if (c.big.degrees != big.degrees() || c.small.degrees != small.degrees())
        throw ValidationError("contraction does not match the Lie algebras");
    if (auto v = c.violations(); !v.empty())
        throw ValidationError("input is not a contraction: " + v.front());
    const std::size_t m = small.size();
    const std::size_t nb = big.size();
    const auto g = c.g.columns();

    // Bracket defect of g and its contraction by h.
    std::vector<SparseVector> psi2(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const SparseVector defect =
                apply_columns(g, small.bracket(i, j)) - big.bracket(g[i], g[j]);
            if (!c.f.apply(defect).empty())
                throw ValidationError("f does not kill the bracket defect of g");
            psi2[i * m + j] = c.h.apply(defect);
        }

    LinftyMorphism out;
    out.psi1 = c.g;
    out.psi2 = SparseMatrix::from_columns(nb, psi2);
    if (max_arity == 2) return out;

    // Shifted components on desuspended representatives: Q2(sa, sb) = (-1)^|a| s[a, b],
    // F1 = g, F2(sa, sb) = (-1)^(|a|+1) s psi2(a, b).
    auto f2 = [&](const SparseVector& a, int deg_a, const SparseVector& b) {
        SparseVector acc;
        for (const auto& [i, ci] : a.entries())
            for (const auto& [j, cj] : b.entries()) acc += (ci * cj) * psi2[i * m + j];
        return Rational(-koszul(deg_a)) * acc;
    };
    auto q2_small = [&](std::size_t i, std::size_t j) {
        return Rational(koszul(small.degree(i))) * small.bracket(i, j);
    };
    auto q2_big = [&](const SparseVector& a, int deg_a, const SparseVector& b) {
        return Rational(koszul(deg_a)) * big.bracket(a, b);
    };
    std::vector<SparseVector> psi3(m * m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                const int di = small.degree(i), dj = small.degree(j), dk = small.degree(k);
                const long si = di + 1, sj = dj + 1, sk = dk + 1;
                SparseVector defect;
                defect += f2(q2_small(i, j), di + dj, unit(k));
                defect += Rational(koszul(sj * sk)) * f2(q2_small(i, k), di + dk, unit(j));
                defect += Rational(koszul(si * (sj + sk))) * f2(q2_small(j, k), dj + dk, unit(i));
                defect -= q2_big(g[i], di, f2(unit(j), dj, unit(k)));
                defect -= Rational(koszul(si * sj)) * q2_big(g[j], dj, f2(unit(i), di, unit(k)));
                defect -= Rational(koszul(sk * (si + sj))) * q2_big(g[k], dk, f2(unit(i), di, unit(j)));
                if (!c.f.apply(defect).empty())
                    throw ValidationError("f does not kill the arity-3 defect; side conditions needed");
                psi3[(i * m + j) * m + k] = Rational(-1) * c.h.apply(defect);
            }
    out.psi3 = SparseMatrix::from_columns(nb, psi3);
    return out;
}

}  // namespace hcm
