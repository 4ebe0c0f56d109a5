#include "eagerpi/encodings.hpp"

#include <cstdlib>

namespace eagerpi::enc {

using lambda::Term;
using pi::Name;
using pi::Process;

const char* to_string(Encoding e) {
    switch (e) {
        case Encoding::MilnerV: return "milner";
        case Encoding::MilnerVPrime: return "milner-prime";
        case Encoding::InternalPi: return "internal";
    }
    return "?";
}

std::optional<Encoding> parse_encoding(std::string_view s) {
    if (s == "milner" || s == "V") return Encoding::MilnerV;
    if (s == "milner-prime" || s == "V'") return Encoding::MilnerVPrime;
    if (s == "internal" || s == "ipi") return Encoding::InternalPi;
    return std::nullopt;
}

std::size_t seed_base() {
    const char* s = std::getenv("EAGERPI_SEED");
    if (s == nullptr || *s == '\0') return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == nullptr || *end != '\0') return 0;
    return static_cast<std::size_t>(v);
}

NameSupply::NameSupply(std::set<std::string> reserved) : NameSupply(std::move(reserved), seed_base()) {}

NameSupply::NameSupply(std::set<std::string> reserved, std::size_t base) : reserved_(std::move(reserved)), base_(base) {}

Name NameSupply::next(const std::string& stem, pi::SortId sort) {
    for (std::size_t i = base_;; ++i) {
        std::string id = i == 0 ? stem : stem + std::to_string(i);
        if (reserved_.insert(id).second) return {id, sort};
    }
}

Name var_name(const std::string& x) { return pi::val(x); }

namespace {

class Encoder {
public:
    Encoder(Encoding e, NameSupply& names, const Hooks& hooks) : e_(e), names_(names), hooks_(hooks) {}

    Process run(const Term& m, const Name& p) {
        switch (m.kind()) {
            case Term::Kind::Var: {
                if (hooks_.placeholders.count(m.name()) != 0) return hooks_.placeholder(m.name(), p);
                Name x = var_name(m.name());
                switch (e_) {
                    case Encoding::MilnerV: return Process::output(p, {x});
                    case Encoding::MilnerVPrime: {
                        Name y = names_.next("y", pi::kVal);
                        Name z = names_.next("z", pi::kVal);
                        Name q = names_.next("q", pi::kCont);
                        return Process::bound_output(p, {y}, Process::replicated(y, {z, q}, Process::output(x, {z, q})));
                    }
                    case Encoding::InternalPi: {
                        Name y = names_.next("y", pi::kVal);
                        return Process::bound_output(p, {y}, pi::forwarder(y, x));
                    }
                }
                break;
            }
            case Term::Kind::Abs: {
                Name y = names_.next("y", pi::kVal);
                Name q = names_.next("q", pi::kCont);
                Name x = var_name(m.name());
                return Process::bound_output(p, {y}, Process::replicated(y, {x, q}, run(m.body(), q)));
            }
            case Term::Kind::App: {
                Name q = names_.next("q", pi::kCont);
                Name y = names_.next("y", pi::kVal);
                Name r = names_.next("r", pi::kCont);
                Name w = names_.next("w", pi::kVal);
                Process call = Process::nil();
                if (e_ == Encoding::InternalPi) {
                    Name w2 = names_.next("w", pi::kVal);
                    Name p2 = names_.next("p", pi::kCont);
                    call = Process::bound_output(y, {w2, p2}, Process::par(pi::forwarder(w2, w), pi::forwarder(p2, p)));
                } else {
                    call = Process::output(y, {w, p});
                }
                Process fun = run(m.fun(), q);
                Process arg = run(m.arg(), r);
                Process inner = Process::restrict(r, Process::par(arg, Process::input(r, {w}, call)));
                return Process::restrict(q, Process::par(fun, Process::input(q, {y}, inner)));
            }
        }
        return Process::nil();
    }

private:
    Encoding e_;
    NameSupply& names_;
    const Hooks& hooks_;
};

}  // namespace

Process encode(Encoding e, const Term& m, const Name& p, NameSupply& names, const Hooks& hooks) {
    names.reserve(p.id);
    return Encoder(e, names, hooks).run(m, p);
}

namespace {

Process encode_default(Encoding e, const Term& m, const Name& p) {
    std::set<std::string> reserved = lambda::all_names(m);
    if (reserved.count(p.id) != 0) throw std::invalid_argument("continuation name " + p.id + " occurs in the term");
    reserved.insert(p.id);
    NameSupply names(std::move(reserved));
    return encode(e, m, p, names);
}

}  // namespace

Process encode_milner(const Term& m, const Name& p) { return encode_default(Encoding::MilnerV, m, p); }
Process encode_milner_prime(const Term& m, const Name& p) { return encode_default(Encoding::MilnerVPrime, m, p); }
Process encode_internal(const Term& m, const Name& p) { return encode_default(Encoding::InternalPi, m, p); }

Encoded encode_with(Encoding e, const Term& m, const Name& p) {
    switch (e) {
        case Encoding::MilnerV: return {encode_milner(m, p), {pi::Dialect::Full, pi::Dialect::Alpi}};
        case Encoding::MilnerVPrime: return {encode_milner_prime(m, p), {pi::Dialect::Full}};
        case Encoding::InternalPi: return {encode_internal(m, p), {pi::Dialect::Internal}};
    }
    return {Process::nil(), {}};
}

}  // namespace eagerpi::enc
