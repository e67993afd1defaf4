#include "mca/predict/profile.hpp"

#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "mca/core/error.hpp"

namespace mca {

const std::string& FieldStat::modal() const {
    static const std::string kEmpty;
    const std::string* best = &kEmpty;
    int best_count = 0;
    for (const auto& [value, count] : counts)
        if (count > best_count) {
            best = &value;
            best_count = count;
        }
    return *best;
}

int FieldStat::modal_count() const {
    int best = 0;
    for (const auto& [value, count] : counts) best = std::max(best, count);
    return best;
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void ProfileStore::observe(const NetworkId& net, const CellId& cell, const std::string& field,
                           const std::string& value) {
    auto& stat = entries_[{net, cell}][field];
    ++stat.counts[value];
    ++stat.total;
}

const ProfileStore::Fields* ProfileStore::cell_profile(const NetworkId& net, const CellId& cell) const {
    auto it = entries_.find({net, cell});
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> ProfileStore::network_modal(const NetworkId& net, const std::string& field) const {
    FieldStat pooled;
    for (auto it = entries_.lower_bound({net, CellId{}}); it != entries_.end() && it->first.first == net; ++it) {
        auto f = it->second.find(field);
        if (f == it->second.end()) continue;
        for (const auto& [value, count] : f->second.counts) pooled.counts[value] += count;
        pooled.total += f->second.total;
    }
    if (pooled.total == 0) return std::nullopt;
    return pooled.modal();
}

std::optional<std::string> ProfileStore::modal(const NetworkId& net, const CellId& cell,
                                               const std::string& field) const {
    if (const auto* p = cell_profile(net, cell)) {
        auto f = p->find(field);
        if (f != p->end() && f->second.total > 0) return f->second.modal();
    }
    return network_modal(net, field);
}

std::optional<double> ProfileStore::modal_number(const NetworkId& net, const CellId& cell,
                                                 const std::string& field) const {
    auto s = modal(net, cell, field);
    if (!s) return std::nullopt;
    if (auto tc = parse_traffic_class(*s)) return static_cast<double>(*tc);
    if (*s == "true") return 1.0;
    if (*s == "false") return 0.0;
    double v = 0.0;
    auto res = std::from_chars(s->data(), s->data() + s->size(), v);
    if (res.ec != std::errc()) return std::nullopt;
    return v;
}

bool ProfileStore::has_network(const NetworkId& net) const {
    auto it = entries_.lower_bound({net, CellId{}});
    return it != entries_.end() && it->first.first == net;
}

void ProfileStore::write_tsv(std::ostream& os) const {
    os << "network\tcell\tfield\tvalue\tcount\tprobability\n";
    for (const auto& [key, fields] : entries_)
        for (const auto& [name, stat] : fields)
            for (const auto& [value, count] : stat.counts)
                os << key.first << '\t' << key.second << '\t' << name << '\t' << value << '\t' << count << '\t'
                   << format_number(static_cast<double>(count) / stat.total) << '\n';
}

ProfileStore ProfileStore::read_tsv(std::istream& is) {
    ProfileStore store;
    std::string line;
    std::getline(is, line);  // header
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (cols.size() != 6) throw Error(Errc::ParseError, "profile line " + std::to_string(lineno) + ": expected 6 columns");
        int count = 0;
        auto res = std::from_chars(cols[4].data(), cols[4].data() + cols[4].size(), count);
        if (res.ec != std::errc() || count <= 0)
            throw Error(Errc::ParseError, "profile line " + std::to_string(lineno) + ": bad count");
        auto& stat = store.entries_[{cols[0], cols[1]}][cols[2]];
        stat.counts[cols[3]] += count;
        stat.total += count;
    }
    return store;
}

void profile_update(ProfileStore& store, const CellularEvent& event) {
    if (const auto* p = std::get_if<EpsPdpSetupPayload>(&event.payload)) {
        store.observe(p->network, p->cell, field::kTrafficClass, std::string(to_string(p->qos.traffic_class)));
        store.observe(p->network, p->cell, field::kDelayClass, std::to_string(p->qos.delay_class));
        store.observe(p->network, p->cell, field::kMaxDlRate, format_number(p->qos.max_dl_rate));
        store.observe(p->network, p->cell, field::kMaxUlRate, format_number(p->qos.max_ul_rate));
        store.observe(p->network, p->cell, field::kDlGbr, format_number(p->qos.dl_gbr));
        store.observe(p->network, p->cell, field::kUlGbr, format_number(p->qos.ul_gbr));
    } else if (const auto* r = std::get_if<RrcReconfigPayload>(&event.payload)) {
        store.observe(r->network, r->cell, field::kTddConfig, std::to_string(r->tdd_config));
        store.observe(r->network, r->cell, field::kPagingCycle, format_number(r->paging_cycle));
        store.observe(r->network, r->cell, field::kHandoffPriority, std::to_string(r->handoff_priority));
        store.observe(r->network, r->cell, field::kHandoffThreshold, format_number(r->handoff_threshold));
    } else if (const auto* l = std::get_if<LocationUpdatePayload>(&event.payload)) {
        store.observe(l->network, l->cell, field::kVoiceOverPs, l->voice_over_ps ? "true" : "false");
    }
}

}  // namespace mca
