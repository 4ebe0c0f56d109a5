#include "eagerpi/sorts.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>

namespace eagerpi::pi {

namespace {

struct Registry {
    std::mutex mu;
    std::deque<SortInfo> sorts;
    std::map<std::string, SortId> by_name;

    Registry() {
        sorts.push_back({"VAL", {kVal, kCont}, false, true});
        sorts.push_back({"CONT", {kVal}, true, true});
        by_name["VAL"] = kVal;
        by_name["CONT"] = kCont;
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

void check_id(const Registry& r, SortId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= r.sorts.size()) throw std::out_of_range("unknown sort id " + std::to_string(id));
}

}  // namespace

SortInfo sort_info(SortId id) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    check_id(r, id);
    return r.sorts[static_cast<std::size_t>(id)];
}

std::optional<SortId> find_sort(const std::string& name) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    auto it = r.by_name.find(name);
    if (it == r.by_name.end()) return std::nullopt;
    return it->second;
}

std::vector<SortId> declare_sorts(const std::vector<SortDecl>& decls) {
    auto& r = registry();
    std::lock_guard lock(r.mu);

    std::map<std::string, const SortDecl*> group;
    for (const auto& d : decls) {
        if (!group.emplace(d.name, &d).second) throw std::invalid_argument("sort " + d.name + " declared twice");
    }
    auto resolve = [&](const std::string& n) -> std::optional<SortId> {
        auto it = r.by_name.find(n);
        if (it != r.by_name.end()) return it->second;
        return std::nullopt;
    };

    std::size_t existing = 0;
    for (const auto& d : decls) existing += r.by_name.count(d.name);
    if (existing == decls.size()) {
        for (const auto& d : decls) {
            const auto& info = r.sorts[static_cast<std::size_t>(r.by_name[d.name])];
            bool same = info.linear == d.linear && info.payload.size() == d.payload.size();
            for (std::size_t i = 0; same && i < d.payload.size(); ++i) {
                auto p = resolve(d.payload[i]);
                same = p && *p == info.payload[i];
            }
            if (!same) throw std::invalid_argument("conflicting redeclaration of sort " + d.name);
        }
        std::vector<SortId> ids;
        for (const auto& d : decls) ids.push_back(r.by_name[d.name]);
        return ids;
    }
    if (existing != 0) throw std::invalid_argument("sort group mixes new and already declared sorts");

    std::vector<SortId> ids;
    for (const auto& d : decls) {
        ids.push_back(static_cast<SortId>(r.sorts.size()));
        r.sorts.push_back({d.name, {}, d.linear, true});
        r.by_name[d.name] = ids.back();
    }
    for (std::size_t i = 0; i < decls.size(); ++i) {
        std::vector<SortId> payload;
        for (const auto& n : decls[i].payload) {
            auto p = resolve(n);
            if (!p) throw std::invalid_argument("unknown sort " + n + " in declaration of " + decls[i].name);
            payload.push_back(*p);
        }
        r.sorts[static_cast<std::size_t>(ids[i])].payload = std::move(payload);
    }
    return ids;
}

SortId new_anonymous_sort() {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    auto id = static_cast<SortId>(r.sorts.size());
    r.sorts.push_back({"_s" + std::to_string(id), {}, false, false});
    return id;
}

void set_anonymous_payload(SortId id, std::vector<SortId> payload) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    check_id(r, id);
    auto& info = r.sorts[static_cast<std::size_t>(id)];
    if (info.declared) throw std::invalid_argument("cannot change the payload of declared sort " + info.name);
    info.payload = std::move(payload);
}

std::vector<SortId> declared_sorts() {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    std::vector<SortId> out;
    for (std::size_t i = 2; i < r.sorts.size(); ++i) {
        if (r.sorts[i].declared) out.push_back(static_cast<SortId>(i));
    }
    out.push_back(kVal);
    out.push_back(kCont);
    return out;
}

}  // namespace eagerpi::pi
