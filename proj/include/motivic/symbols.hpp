#ifndef MOTIVIC_SYMBOLS_HPP
#define MOTIVIC_SYMBOLS_HPP

#include <map>
#include <string>
#include <vector>

#include "motivic/errors.hpp"

namespace motivic {

using SymbolId = unsigned;

/// A declared variety class [S]: a name and the dimension of S.
struct ClassSymbol {
    std::string name;
    int dim = 0;
    SymbolId id = 0;
};

/// Append-only table of declared class symbols. Lookup of an undeclared
/// name throws; there is no silent default.
class SymbolRegistry {
public:
    SymbolId declare(const std::string& name, int dim)
    {
        if (name.empty())
            throw validation_error("class symbol name must be nonempty");
        if (dim < 0)
            throw validation_error("class symbol '" + name + "' has negative dimension");
        if (by_name_.count(name))
            throw validation_error("class symbol '" + name + "' already declared");
        SymbolId id = static_cast<SymbolId>(symbols_.size());
        symbols_.push_back(ClassSymbol{name, dim, id});
        by_name_.emplace(name, id);
        return id;
    }

    const ClassSymbol& at(SymbolId id) const
    {
        if (id >= symbols_.size())
            throw validation_error("unknown class symbol id");
        return symbols_[id];
    }

    const ClassSymbol& at(const std::string& name) const { return symbols_[id_of(name)]; }

    SymbolId id_of(const std::string& name) const
    {
        auto it = by_name_.find(name);
        if (it == by_name_.end())
            throw validation_error("class symbol '" + name + "' is not declared");
        return it->second;
    }

    bool contains(const std::string& name) const { return by_name_.count(name) != 0; }
    std::size_t size() const { return symbols_.size(); }

private:
    std::vector<ClassSymbol> symbols_;
    std::map<std::string, SymbolId> by_name_;
};

} // namespace motivic

#endif
