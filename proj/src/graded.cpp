#include "defo/graded.hpp"

namespace defo::graded {

GradedSpace::GradedSpace(std::map<int, std::size_t> dims,
                         std::map<int, std::vector<std::string>> names)
    : dims_(std::move(dims)), names_(std::move(names)) {
    for (auto it = dims_.begin(); it != dims_.end();) {
        if (it->second == 0)
            it = dims_.erase(it);
        else
            ++it;
    }
    for (const auto& [deg, list] : names_) {
        auto it = dims_.find(deg);
        if (it == dims_.end() || list.size() != it->second)
            throw InputError("GradedSpace: basis names do not match dimensions");
    }
}

std::size_t GradedSpace::dim(int degree) const {
    auto it = dims_.find(degree);
    return it == dims_.end() ? 0 : it->second;
}

std::vector<int> GradedSpace::degrees() const {
    std::vector<int> out;
    for (const auto& [deg, d] : dims_) out.push_back(deg);
    return out;
}

std::size_t GradedSpace::total_dim() const {
    std::size_t t = 0;
    for (const auto& [deg, d] : dims_) t += d;
    return t;
}

std::string GradedSpace::basis_name(int degree, std::size_t i) const {
    if (i >= dim(degree)) throw InputError("GradedSpace::basis_name: index out of range");
    auto it = names_.find(degree);
    if (it != names_.end()) return it->second[i];
    return "g" + std::to_string(degree) + "_" + std::to_string(i);
}

GradedMap::GradedMap(GradedSpace source, GradedSpace target, int shift,
                     std::map<int, Matrix> blocks)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift),
      blocks_(std::move(blocks)) {
    for (auto it = blocks_.begin(); it != blocks_.end();) {
        const auto& [deg, m] = *it;
        if (m.rows() != target_.dim(deg + shift_) || m.cols() != source_.dim(deg))
            throw InputError("GradedMap: block shape mismatch at degree " +
                             std::to_string(deg));
        it = m.is_zero() ? blocks_.erase(it) : std::next(it);
    }
}

GradedMap GradedMap::zero(GradedSpace source, GradedSpace target, int shift) {
    return GradedMap(std::move(source), std::move(target), shift, {});
}

GradedMap GradedMap::identity(const GradedSpace& space) {
    std::map<int, Matrix> blocks;
    for (int deg : space.degrees()) blocks.emplace(deg, Matrix::identity(space.dim(deg)));
    return GradedMap(space, space, 0, std::move(blocks));
}

Matrix GradedMap::block(int degree) const {
    auto it = blocks_.find(degree);
    if (it != blocks_.end()) return it->second;
    return Matrix(target_.dim(degree + shift_), source_.dim(degree));
}

GradedMap GradedMap::compose(const GradedMap& inner) const {
    if (!(inner.target_ == source_))
        throw InputError("GradedMap::compose: middle spaces do not match");
    std::map<int, Matrix> blocks;
    for (const auto& [deg, m] : inner.blocks_) {
        Matrix outer = block(deg + inner.shift_);
        if (outer.rows() == 0 || outer.cols() == 0) continue;
        blocks.emplace(deg, outer * m);
    }
    return GradedMap(inner.source_, target_, shift_ + inner.shift_, std::move(blocks));
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
    if (!(source_ == o.source_) || !(target_ == o.target_) || shift_ != o.shift_)
        throw InputError("GradedMap::operator+: signature mismatch");
    std::map<int, Matrix> blocks = blocks_;
    for (const auto& [deg, m] : o.blocks_) {
        auto it = blocks.find(deg);
        if (it == blocks.end())
            blocks.emplace(deg, m);
        else
            it->second = it->second + m;
    }
    return GradedMap(source_, target_, shift_, std::move(blocks));
}

GradedMap GradedMap::operator-(const GradedMap& o) const {
    return *this + o.scaled(Rational(-1));
}

GradedMap GradedMap::scaled(const Rational& c) const {
    std::map<int, Matrix> blocks;
    if (!c.is_zero())
        for (const auto& [deg, m] : blocks_) blocks.emplace(deg, m.scaled(c));
    return GradedMap(source_, target_, shift_, std::move(blocks));
}

std::map<int, Cohomology> complex_cohomology(const GradedSpace& space, const GradedMap& d) {
    if (!(d.source() == space) || !(d.target() == space))
        throw InputError("complex_cohomology: differential not an endomap of the space");
    if (d.shift() != 1) throw InputError("complex_cohomology: differential must have shift 1");
    if (!d.compose(d).is_zero())
        throw NotADifferential("complex_cohomology: d composed with d is nonzero");
    std::map<int, Cohomology> out;
    for (int deg : space.degrees()) {
        Matrix d_out = d.block(deg);
        Matrix d_in = d.block(deg - 1);
        Cohomology h;
        h.representatives = exactalg::cohomology_representatives(d_out, d_in);
        h.dim = h.representatives.cols();
        if (h.dim != exactalg::cohomology_dim_at(d_out, d_in))
            throw MathCheckError("complex_cohomology: representative count mismatch");
        out.emplace(deg, std::move(h));
    }
    return out;
}

GradedSpace tensor_artin(const GradedSpace& space, const artin::ArtinAlgebra& a) {
    const std::size_t r = a.dim();
    std::map<int, std::size_t> dims;
    std::map<int, std::vector<std::string>> names;
    for (int deg : space.degrees()) {
        dims[deg] = space.dim(deg) * r;
        std::vector<std::string> list;
        for (std::size_t v = 0; v < space.dim(deg); ++v)
            for (std::size_t e = 0; e < r; ++e)
                list.push_back(space.basis_name(deg, v) + "(x)" + a.basis_names()[e]);
        names[deg] = std::move(list);
    }
    return GradedSpace(std::move(dims), std::move(names));
}

GradedMap tensor_map_artin(const GradedMap& map, const artin::ArtinAlgebra& a) {
    Matrix id = Matrix::identity(a.dim());
    std::map<int, Matrix> blocks;
    for (const auto& [deg, m] : map.stored_blocks()) blocks.emplace(deg, m.kron(id));
    return GradedMap(tensor_artin(map.source(), a), tensor_artin(map.target(), a),
                     map.shift(), std::move(blocks));
}

} // namespace defo::graded
