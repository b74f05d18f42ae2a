#ifndef MOTIVIC_LOCALIZED_HPP
#define MOTIVIC_LOCALIZED_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "motivic/motivic_element.hpp"

namespace motivic {

/// A fraction num / prod (L^i - 1) over a multiset of atom exponents i >= 1.
/// Reduction is attempted atom by atom (exact division); an empty
/// denominator means the value lies in M_k itself.
class LocalizedMotivicElement {
public:
    LocalizedMotivicElement() = default;

    LocalizedMotivicElement(MotivicElement num, std::vector<int> den = {})
        : num_(std::move(num)), den_(std::move(den))
    {
        for (int i : den_)
            if (i < 1)
                throw validation_error("denominator atom exponent must be >= 1");
        std::sort(den_.begin(), den_.end());
        reduce();
    }

    static LocalizedMotivicElement zero() { return LocalizedMotivicElement(); }
    static LocalizedMotivicElement one() { return LocalizedMotivicElement(MotivicElement::one()); }

    /// (L - 1)^-n and more generally (L^i - 1)^-n.
    static LocalizedMotivicElement atom_inverse(int i, int n = 1)
    {
        return LocalizedMotivicElement(MotivicElement::one(), std::vector<int>(static_cast<std::size_t>(n), i));
    }

    const MotivicElement& num() const { return num_; }
    const std::vector<int>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool in_base_ring() const { return den_.empty(); }

    static MotivicElement atom_element(int i)
    {
        return MotivicElement::L_pow(i) - MotivicElement::one();
    }

    MotivicElement den_element() const
    {
        MotivicElement d = MotivicElement::one();
        for (int i : den_)
            d *= atom_element(i);
        return d;
    }

    LocalizedMotivicElement operator-() const
    {
        LocalizedMotivicElement out;
        out.num_ = -num_;
        out.den_ = den_;
        return out;
    }

    friend LocalizedMotivicElement operator+(const LocalizedMotivicElement& a,
                                             const LocalizedMotivicElement& b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        // common denominator: per-value max multiplicity
        std::map<int, int> ma = multiplicities(a.den_), mb = multiplicities(b.den_);
        std::map<int, int> mc = ma;
        for (const auto& [i, n] : mb)
            mc[i] = std::max(mc[i], n);
        MotivicElement na = a.num_, nb = b.num_;
        std::vector<int> den;
        for (const auto& [i, n] : mc) {
            for (int t = 0; t < n; ++t)
                den.push_back(i);
            int extra_a = n - (ma.count(i) ? ma[i] : 0);
            int extra_b = n - (mb.count(i) ? mb[i] : 0);
            for (int t = 0; t < extra_a; ++t)
                na *= atom_element(i);
            for (int t = 0; t < extra_b; ++t)
                nb *= atom_element(i);
        }
        return LocalizedMotivicElement(na + nb, std::move(den));
    }

    friend LocalizedMotivicElement operator-(const LocalizedMotivicElement& a,
                                             const LocalizedMotivicElement& b)
    {
        return a + (-b);
    }

    friend LocalizedMotivicElement operator*(const LocalizedMotivicElement& a,
                                             const LocalizedMotivicElement& b)
    {
        std::vector<int> den = a.den_;
        den.insert(den.end(), b.den_.begin(), b.den_.end());
        return LocalizedMotivicElement(a.num_ * b.num_, std::move(den));
    }

    LocalizedMotivicElement& operator+=(const LocalizedMotivicElement& o) { return *this = *this + o; }
    LocalizedMotivicElement& operator-=(const LocalizedMotivicElement& o) { return *this = *this - o; }
    LocalizedMotivicElement& operator*=(const LocalizedMotivicElement& o) { return *this = *this * o; }

    /// Ring equality by cross-multiplication of canonical forms.
    bool equals(const LocalizedMotivicElement& o) const
    {
        if (den_ == o.den_)
            return num_ == o.num_;
        return num_ * o.den_element() == o.num_ * den_element();
    }

    bool operator==(const LocalizedMotivicElement& o) const { return equals(o); }
    bool operator!=(const LocalizedMotivicElement& o) const { return !equals(o); }

    /// Norm extension to the localization: ||num|| / ||prod (L^i - 1)||,
    /// using that (L^i - 1) has norm exactly 2^i.
    Rat norm() const
    {
        Rat n = num_.norm();
        int shift = 0;
        for (int i : den_)
            shift += i;
        return n / detail::rat_pow(Rat(2), shift);
    }

    Rat specialize_counts(const Rat& q, const std::map<SymbolId, Rat>& counts) const
    {
        Rat v = num_.specialize_counts(q, counts);
        for (int i : den_) {
            Rat d = detail::rat_pow(q, i) - 1;
            if (d == 0)
                throw validation_error("specialization divides by zero: q^" + std::to_string(i) + " = 1");
            v /= d;
        }
        return v;
    }

    std::string to_string() const
    {
        std::string n = num_.to_string();
        if (den_.empty())
            return n;
        if (num_.terms().size() > 1)
            n = "(" + n + ")";
        std::string d;
        for (std::size_t i = 0; i < den_.size(); ++i) {
            if (i)
                d += "*";
            d += den_[i] == 1 ? "(L - 1)" : "(L^" + std::to_string(den_[i]) + " - 1)";
        }
        if (den_.size() > 1)
            d = "(" + d + ")";
        return n + " / " + d;
    }

private:
    static std::map<int, int> multiplicities(const std::vector<int>& v)
    {
        std::map<int, int> m;
        for (int i : v)
            ++m[i];
        return m;
    }

    void reduce()
    {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        bool progress = true;
        while (progress && !den_.empty()) {
            progress = false;
            for (auto it = den_.begin(); it != den_.end(); ++it) {
                if (auto q = num_.divide_by_atom(*it)) {
                    num_ = std::move(*q);
                    den_.erase(it);
                    progress = true;
                    break;
                }
            }
        }
    }

    MotivicElement num_;
    std::vector<int> den_;
};

} // namespace motivic

#endif
