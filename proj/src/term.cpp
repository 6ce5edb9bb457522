#include "qclp/term.hpp"

#include <atomic>
#include <cassert>
#include <mutex>
#include <unordered_map>

namespace qclp {

namespace {

std::atomic<std::uint64_t> g_var_counter{0};
std::mutex g_var_names_mutex;
std::unordered_map<std::uint64_t, std::string>& var_names() {
    static std::unordered_map<std::uint64_t, std::string> names;
    return names;
}

}  // namespace

Variable Variable::fresh() {
    return Variable(g_var_counter.fetch_add(1, std::memory_order_relaxed));
}

Variable Variable::fresh(const std::string& name) {
    Variable v = fresh();
    std::lock_guard lock(g_var_names_mutex);
    var_names().emplace(v.id_, name);
    return v;
}

std::string Variable::name() const {
    {
        std::lock_guard lock(g_var_names_mutex);
        auto it = var_names().find(id_);
        if (it != var_names().end()) return it->second;
    }
    return "_G" + std::to_string(id_);
}

Term::Term(Variable v) : rep_(std::make_shared<Rep>(Rep{true, v, {}, {}})) {}

Term::Term(std::string functor, std::vector<Term> args)
    : rep_(std::make_shared<Rep>(Rep{false, Variable::fresh(), std::move(functor), std::move(args)})) {}

Variable Term::var() const {
    assert(rep_->is_var);
    return rep_->v;
}

void Term::collect_vars(VarSet& out) const {
    if (is_var()) {
        out.insert(var());
        return;
    }
    for (const Term& a : args()) a.collect_vars(out);
}

VarSet Term::vars() const {
    VarSet out;
    collect_vars(out);
    return out;
}

bool Term::contains(Variable v) const {
    if (is_var()) return var() == v;
    for (const Term& a : args())
        if (a.contains(v)) return true;
    return false;
}

bool Term::is_function_free() const {
    if (is_var()) return true;
    return args().empty();
}

std::string Term::to_string() const {
    if (is_var()) return var().name();
    std::string out = functor();
    if (!args().empty()) {
        out += '(';
        for (size_t i = 0; i < args().size(); ++i) {
            if (i) out += ", ";
            out += args()[i].to_string();
        }
        out += ')';
    }
    return out;
}

bool Term::structural_equal(const Term& a, const Term& b) {
    if (a.rep_ == b.rep_) return true;
    if (a.is_var() != b.is_var()) return false;
    if (a.is_var()) return a.var() == b.var();
    if (a.functor() != b.functor() || a.args().size() != b.args().size()) return false;
    for (size_t i = 0; i < a.args().size(); ++i)
        if (!structural_equal(a.args()[i], b.args()[i])) return false;
    return true;
}

int Term::compare(const Term& a, const Term& b) {
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (a.is_var()) {
        if (a.var() == b.var()) return 0;
        return a.var() < b.var() ? -1 : 1;
    }
    if (int c = a.functor().compare(b.functor()); c != 0) return c < 0 ? -1 : 1;
    if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
    for (size_t i = 0; i < a.args().size(); ++i)
        if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
    return 0;
}

bool Renaming::add(Variable from, Variable to) {
    if (range_.count(to)) {
        auto it = map_.find(from);
        return it != map_.end() && it->second == to;
    }
    if (map_.count(from)) return map_.at(from) == to;
    map_.emplace(from, to);
    range_.insert(to);
    return true;
}

Variable Renaming::apply(Variable v) const {
    auto it = map_.find(v);
    return it == map_.end() ? v : it->second;
}

Term Renaming::apply(const Term& t) const {
    if (t.is_var()) return Term(apply(t.var()));
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(apply(a));
    return Term(t.functor(), std::move(args));
}

Renaming Renaming::inverse() const {
    Renaming inv;
    for (const auto& [from, to] : map_) inv.add(to, from);
    return inv;
}

Term substitute(const Term& t, const std::map<Variable, Term>& bindings) {
    if (t.is_var()) {
        auto it = bindings.find(t.var());
        return it == bindings.end() ? t : it->second;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(substitute(a, bindings));
    return Term(t.functor(), std::move(args));
}

}  // namespace qclp
