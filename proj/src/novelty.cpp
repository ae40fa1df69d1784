#include "novopoly/novelty.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "novopoly/hash.hpp"

namespace novopoly {

namespace {

constexpr std::array<std::pair<NoveltyFamily, std::string_view>, 12> kFamilyNames{{
    {NoveltyFamily::dice_count, "dice-count"},
    {NoveltyFamily::dice_bias, "dice-bias"},
    {NoveltyFamily::color_collapse, "color-collapse"},
    {NoveltyFamily::recolor, "recolor"},
    {NoveltyFamily::swap_extend, "swap-extend"},
    {NoveltyFamily::price_scale, "price-scale"},
    {NoveltyFamily::rent_scale, "rent-scale"},
    {NoveltyFamily::tax_change, "tax-change"},
    {NoveltyFamily::go_increment_change, "go-increment-change"},
    {NoveltyFamily::card_amount_change, "card-amount-change"},
    {NoveltyFamily::new_improvement_tier, "new-improvement-tier"},
    {NoveltyFamily::board_scramble, "board-scramble"},
}};

constexpr int kMaxDice = 8;
constexpr int kMaxWidth = 10;
constexpr double kMaxFactor = 10.0;

bool is_int(const json& j) { return j.is_number_integer() || j.is_number_unsigned(); }

bool is_string_list(const json& j) {
    return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_string(); });
}

void check_factor(const json& p, const char* key, double lo_exclusive, std::vector<std::string>& out,
                  bool allow_zero = false) {
    auto it = p.find(key);
    if (it == p.end() || !it->is_number()) {
        out.push_back(std::string("parameter '") + key + "' must be a number");
        return;
    }
    const double v = it->get<double>();
    if (!(allow_zero ? v >= 0.0 : v > lo_exclusive) || v > kMaxFactor) {
        out.push_back(std::string("parameter '") + key + "' out of range");
    }
}

Money scaled(Money v, double factor, Money floor_value) {
    return std::max<Money>(floor_value, static_cast<Money>(std::llround(static_cast<double>(v) * factor)));
}

// Rounding can flatten a table; nudge it back to strictly increasing.
void force_increasing(std::vector<Money>& rent) {
    for (std::size_t i = 1; i < rent.size(); ++i) rent[i] = std::max(rent[i], rent[i - 1] + 1);
}

int require_slot(const BoardSchema& s, const std::string& name) {
    auto idx = s.index_of(name);
    if (!idx) throw InjectionError("no slot named '" + name + "'");
    return *idx;
}

void recolor_slot(BoardSchema& s, const std::string& name, const std::string& color) {
    Slot& slot = s.slots[static_cast<std::size_t>(require_slot(s, name))];
    if (slot.kind != SlotKind::street || slot.replica()) throw InjectionError("'" + name + "' is not a street");
    slot.color = color;
}

}  // namespace

std::string_view to_string(NoveltyCategory c) {
    switch (c) {
        case NoveltyCategory::attribute: return "attribute";
        case NoveltyCategory::entity_class: return "class";
        case NoveltyCategory::representation: return "representation";
    }
    return "?";
}

std::string_view to_string(NoveltyFamily f) {
    for (const auto& [k, n] : kFamilyNames) {
        if (k == f) return n;
    }
    return "?";
}

std::optional<NoveltyFamily> novelty_family_from_string(std::string_view name) {
    for (const auto& [k, n] : kFamilyNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

NoveltyCategory category_of(NoveltyFamily f) {
    switch (f) {
        case NoveltyFamily::dice_count:
        case NoveltyFamily::dice_bias:
        case NoveltyFamily::new_improvement_tier:
            return NoveltyCategory::entity_class;
        case NoveltyFamily::swap_extend:
        case NoveltyFamily::board_scramble:
            return NoveltyCategory::representation;
        default:
            return NoveltyCategory::attribute;
    }
}

// ---- serialization ----

namespace {

json sampler_to_json(const ParamSampler& s) {
    json j{{"param", s.param}, {"choices", s.choices}};
    if (!s.weights.empty()) j["weights"] = s.weights;
    return j;
}

json identity_json(const NoveltySpec& spec) {
    json j{{"family", to_string(spec.family)}, {"params", spec.params}};
    if (spec.sampler) j["sampler"] = sampler_to_json(*spec.sampler);
    return j;
}

}  // namespace

std::string NoveltySpec::id() const { return content_id(identity_json(*this).dump()); }

std::string NoveltyInstance::id() const {
    return content_id(json{{"spec", spec_id}, {"params", params}}.dump());
}

json spec_to_json(const NoveltySpec& spec) {
    json j = identity_json(spec);
    j["id"] = spec.id();
    j["category"] = to_string(spec.category());
    if (!spec.name.empty()) j["name"] = spec.name;
    if (!spec.difficulty.empty()) j["difficulty"] = spec.difficulty;
    return j;
}

NoveltySpec spec_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("novelty spec must be an object");
    NoveltySpec s;
    auto fam = j.find("family");
    if (fam == j.end() || !fam->is_string()) throw std::invalid_argument("novelty spec needs a family");
    auto f = novelty_family_from_string(fam->get<std::string>());
    if (!f) throw std::invalid_argument("unknown novelty family '" + fam->get<std::string>() + "'");
    s.family = *f;
    s.params = j.value("params", json::object());
    if (!s.params.is_object()) throw std::invalid_argument("novelty params must be an object");
    s.name = j.value("name", std::string{});
    s.difficulty = j.value("difficulty", std::string{});
    if (auto it = j.find("sampler"); it != j.end() && !it->is_null()) {
        if (!it->is_object() || !it->contains("param") || !it->contains("choices") || !(*it)["choices"].is_array()) {
            throw std::invalid_argument("sampler needs 'param' and a 'choices' array");
        }
        ParamSampler ps;
        ps.param = (*it)["param"].get<std::string>();
        ps.choices = (*it)["choices"].get<std::vector<json>>();
        if (it->contains("weights")) ps.weights = (*it)["weights"].get<std::vector<double>>();
        s.sampler = std::move(ps);
    }
    if (auto cat = j.find("category"); cat != j.end() && cat->is_string() && *cat != to_string(s.category())) {
        throw std::invalid_argument("category '" + cat->get<std::string>() + "' does not match family '" +
                                    std::string(to_string(s.family)) + "'");
    }
    return s;
}

json instance_to_json(const NoveltyInstance& inst) {
    return json{{"id", inst.id()},
                {"spec_id", inst.spec_id},
                {"family", to_string(inst.family)},
                {"params", inst.params},
                {"game_index", inst.game_index}};
}

NoveltyInstance instance_from_json(const json& j) {
    NoveltyInstance inst;
    inst.spec_id = j.at("spec_id").get<std::string>();
    auto f = novelty_family_from_string(j.at("family").get<std::string>());
    if (!f) throw std::invalid_argument("unknown novelty family");
    inst.family = *f;
    inst.params = j.at("params");
    inst.game_index = j.value("game_index", 0);
    return inst;
}

std::vector<NoveltySpec> load_novelties(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw std::invalid_argument("novelty file is not valid JSON");
    std::vector<NoveltySpec> out;
    const json* list = &doc;
    if (doc.is_object() && doc.contains("novelties")) list = &doc["novelties"];
    if (list->is_array()) {
        for (const auto& item : *list) out.push_back(spec_from_json(item));
    } else {
        out.push_back(spec_from_json(*list));
    }
    return out;
}

// ---- validation ----

std::vector<std::string> validate_params(NoveltyFamily family, const json& p) {
    std::vector<std::string> out;
    if (!p.is_object()) return {"params must be an object"};
    auto need_int = [&](const char* key, long lo, long hi) {
        auto it = p.find(key);
        if (it == p.end() || !is_int(*it)) {
            out.push_back(std::string("parameter '") + key + "' must be an integer");
        } else if (it->get<long>() < lo || it->get<long>() > hi) {
            out.push_back(std::string("parameter '") + key + "' must be in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
        }
    };
    auto need_string = [&](const char* key) {
        auto it = p.find(key);
        if (it == p.end() || !it->is_string() || it->get<std::string>().empty()) {
            out.push_back(std::string("parameter '") + key + "' must be a nonempty string");
        }
    };
    switch (family) {
        case NoveltyFamily::dice_count:
            need_int("count", 1, kMaxDice);
            break;
        case NoveltyFamily::dice_bias: {
            need_int("die", 0, kMaxDice - 1);
            auto w = p.find("weights");
            if (w == p.end() || !w->is_array() || w->empty() ||
                !std::all_of(w->begin(), w->end(), [](const json& x) { return x.is_number(); })) {
                out.push_back("parameter 'weights' must be a nonempty list of numbers");
                break;
            }
            double total = 0.0;
            for (const auto& x : *w) {
                if (x.get<double>() < 0.0) out.push_back("dice weights must be nonnegative");
                total += x.get<double>();
            }
            if (std::abs(total - 1.0) > 1e-9) out.push_back("dice weights not normalized");
            break;
        }
        case NoveltyFamily::color_collapse:
            need_string("keep");
            need_string("to");
            if (out.empty() && p["keep"] == p["to"]) out.push_back("'keep' and 'to' must differ");
            break;
        case NoveltyFamily::recolor:
            if (!is_string_list(p.value("slots", json()))) out.push_back("parameter 'slots' must be a nonempty list of names");
            need_string("color");
            break;
        case NoveltyFamily::swap_extend: {
            if (!is_string_list(p.value("slots", json()))) out.push_back("parameter 'slots' must be a nonempty list of names");
            need_int("width", 1, kMaxWidth);
            const bool swaps = p.contains("swap_with");
            if (swaps && (!p["swap_with"].is_string() || p["swap_with"].get<std::string>().empty())) {
                out.push_back("parameter 'swap_with' must be a slot name");
            }
            if (out.empty() && p["width"].get<int>() == 1 && !swaps) out.push_back("width 1 without swap_with changes nothing");
            break;
        }
        case NoveltyFamily::price_scale:
        case NoveltyFamily::rent_scale:
            check_factor(p, "factor", 0.0, out);
            break;
        case NoveltyFamily::tax_change:
            need_string("slot");
            need_int("amount", 0, 1000000);
            break;
        case NoveltyFamily::go_increment_change:
            need_int("amount", 0, 1000000);
            break;
        case NoveltyFamily::card_amount_change:
            check_factor(p, "factor", 0.0, out, true);
            break;
        case NoveltyFamily::new_improvement_tier:
            check_factor(p, "rent_multiplier", 1.0, out);
            check_factor(p, "cost_multiplier", 0.0, out);
            break;
        case NoveltyFamily::board_scramble:
            if (!p.contains("seed") || !is_int(p["seed"]) || p["seed"].get<long long>() < 0) {
                out.push_back("parameter 'seed' must be a nonnegative integer");
            }
            break;
    }
    return out;
}

std::vector<std::string> validate_spec(const NoveltySpec& spec) {
    if (!spec.sampler) return validate_params(spec.family, spec.params);
    std::vector<std::string> out;
    const ParamSampler& s = *spec.sampler;
    if (s.param.empty()) out.push_back("sampler needs a parameter name");
    if (s.choices.empty()) out.push_back("sampler needs at least one choice");
    if (!s.weights.empty()) {
        if (s.weights.size() != s.choices.size()) out.push_back("sampler weights must match choices");
        if (std::any_of(s.weights.begin(), s.weights.end(), [](double w) { return !(w >= 0.0); })) {
            out.push_back("sampler weights must be nonnegative");
        }
        if (std::accumulate(s.weights.begin(), s.weights.end(), 0.0) <= 0.0) out.push_back("sampler weights sum to zero");
    }
    for (std::size_t i = 0; i < s.choices.size(); ++i) {
        json p = spec.params;
        p[s.param] = s.choices[i];
        for (auto& v : validate_params(spec.family, p)) out.push_back("choice " + std::to_string(i) + ": " + v);
    }
    return out;
}

// ---- transforms ----

std::pair<BoardSchema, GameLimits> apply_novelty(const BoardSchema& schema, const GameLimits& limits,
                                                 const NoveltyInstance& inst) {
    if (auto v = validate_params(inst.family, inst.params); !v.empty()) {
        throw InjectionError(std::string(to_string(inst.family)) + ": " + v.front());
    }
    BoardSchema s = schema;
    const json& p = inst.params;
    switch (inst.family) {
        case NoveltyFamily::dice_count: {
            const int count = p["count"].get<int>();
            if (!s.dice.weights.empty()) {
                auto last = s.dice.weights.back();
                s.dice.weights.resize(static_cast<std::size_t>(count), last);
            }
            s.dice.count = count;
            break;
        }
        case NoveltyFamily::dice_bias: {
            const int die = p["die"].get<int>();
            auto w = p["weights"].get<std::vector<double>>();
            if (die >= s.dice.count) throw InjectionError("dice-bias: die index beyond dice count");
            if (static_cast<int>(w.size()) != s.dice.faces) throw InjectionError("dice-bias: weight count must equal faces");
            if (s.dice.weights.empty()) {
                for (int d = 0; d < s.dice.count; ++d) s.dice.weights.push_back(s.dice.die_weights(d));
            }
            s.dice.weights[static_cast<std::size_t>(die)] = std::move(w);
            s.dice.normalize();
            break;
        }
        case NoveltyFamily::color_collapse: {
            const auto keep = p["keep"].get<std::string>();
            const auto to = p["to"].get<std::string>();
            if (!s.color_groups.contains(keep)) throw InjectionError("color-collapse: no color group '" + keep + "'");
            for (auto& slot : s.slots) {
                if (slot.kind == SlotKind::street && slot.color != keep) slot.color = to;
            }
            rebuild_color_groups(s);
            break;
        }
        case NoveltyFamily::recolor:
            for (const auto& name : p["slots"]) recolor_slot(s, name.get<std::string>(), p["color"].get<std::string>());
            for (auto& slot : s.slots) {
                // Replicas follow their original.
                if (slot.replica() && slot.kind == SlotKind::street) {
                    slot.color = s.slots[static_cast<std::size_t>(s.property_index(*s.index_of(slot.name)))].color;
                }
            }
            rebuild_color_groups(s);
            break;
        case NoveltyFamily::swap_extend: {
            const int width = p["width"].get<int>();
            const auto targets = p["slots"].get<std::vector<std::string>>();
            if (p.contains("swap_with")) {
                if (targets.size() != 1) throw InjectionError("swap-extend: swap_with needs exactly one target slot");
                const int a = require_slot(s, targets.front());
                const int b = require_slot(s, p["swap_with"].get<std::string>());
                if (a == 0 || b == 0) throw InjectionError("swap-extend: Go cannot move");
                std::swap(s.slots[static_cast<std::size_t>(a)], s.slots[static_cast<std::size_t>(b)]);
            }
            const std::size_t final_size = s.slots.size() + targets.size() * static_cast<std::size_t>(width - 1);
            if (final_size > static_cast<std::size_t>(s.max_slots)) {
                throw InjectionError("swap-extend: board would have " + std::to_string(final_size) +
                                     " slots, above max_slots " + std::to_string(s.max_slots));
            }
            for (const auto& name : targets) {
                const int idx = require_slot(s, name);
                const Slot orig = s.slots[static_cast<std::size_t>(idx)];
                if (orig.replica()) throw InjectionError("swap-extend: '" + name + "' is already a replica");
                if (orig.kind == SlotKind::go || orig.kind == SlotKind::jail) {
                    throw InjectionError("swap-extend: cannot extend '" + name + "'");
                }
                std::vector<Slot> copies;
                for (int k = 2; k <= width; ++k) {
                    Slot c = orig;
                    c.name = name + " ~" + std::to_string(k);
                    c.extends = name;
                    if (s.index_of(c.name)) throw InjectionError("swap-extend: slot name '" + c.name + "' taken");
                    copies.push_back(std::move(c));
                }
                s.slots.insert(s.slots.begin() + idx + 1, copies.begin(), copies.end());
            }
            break;
        }
        case NoveltyFamily::price_scale: {
            const double f = p["factor"].get<double>();
            for (auto& slot : s.slots) {
                if (slot.purchasable()) slot.price = scaled(slot.price, f, 1);
            }
            break;
        }
        case NoveltyFamily::rent_scale: {
            const double f = p["factor"].get<double>();
            for (auto& slot : s.slots) {
                if (slot.kind == SlotKind::street) {
                    for (auto& r : slot.rent) r = scaled(r, f, 1);
                    force_increasing(slot.rent);
                } else if (slot.kind == SlotKind::railroad) {
                    for (auto& r : slot.rent) r = scaled(r, f, 1);
                }
            }
            break;
        }
        case NoveltyFamily::tax_change: {
            const auto name = p["slot"].get<std::string>();
            const int idx = require_slot(s, name);
            if (s.slots[static_cast<std::size_t>(idx)].kind != SlotKind::tax) {
                throw InjectionError("tax-change: '" + name + "' is not a tax slot");
            }
            for (auto& slot : s.slots) {
                if (slot.name == name || slot.extends == name) slot.tax = p["amount"].get<Money>();
            }
            break;
        }
        case NoveltyFamily::go_increment_change:
            s.go_increment = p["amount"].get<Money>();
            break;
        case NoveltyFamily::card_amount_change: {
            const double f = p["factor"].get<double>();
            for (auto* deck : {&s.chance, &s.community_chest}) {
                for (auto& c : *deck) {
                    c.amount = scaled(c.amount, f, 0);
                    c.per_hotel = scaled(c.per_hotel, f, 0);
                }
            }
            break;
        }
        case NoveltyFamily::new_improvement_tier: {
            const double rm = p["rent_multiplier"].get<double>();
            const double cm = p["cost_multiplier"].get<double>();
            for (auto& slot : s.slots) {
                if (slot.kind != SlotKind::street) continue;
                const Money top = slot.rent.back();
                slot.rent.push_back(std::max(top + 1, scaled(top, rm, 1)));
                slot.tier_costs.push_back(scaled(slot.house_cost, cm, 1));
            }
            break;
        }
        case NoveltyFamily::board_scramble: {
            Rng rng(p["seed"].get<std::uint64_t>());
            std::vector<Slot> rest(s.slots.begin() + 1, s.slots.end());
            rng.shuffle(rest);
            std::copy(rest.begin(), rest.end(), s.slots.begin() + 1);
            rebuild_color_groups(s);
            break;
        }
    }
    if (auto v = validate_schema(s); !v.empty()) {
        throw InjectionError(std::string(to_string(inst.family)) + " produced an invalid board: " + v.front());
    }
    return {std::move(s), limits};
}

NoveltyInstance fixed_instance(const NoveltySpec& spec, int game_index) {
    return NoveltyInstance{spec.id(), spec.family, spec.params, game_index};
}

NoveltyInstance sample_instance(const NoveltySpec& spec, Rng& rng, int game_index) {
    NoveltyInstance inst = fixed_instance(spec, game_index);
    if (!spec.sampler || spec.sampler->choices.empty()) return inst;
    const ParamSampler& s = *spec.sampler;
    const std::size_t pick = s.weights.empty() ? static_cast<std::size_t>(rng.below(s.choices.size()))
                                               : rng.weighted(s.weights);
    inst.params[s.param] = s.choices[pick];
    return inst;
}

NoveltyInstance instance_for_game(const NoveltySpec& spec, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6e6f76ULL));
    return sample_instance(spec, rng, 1);
}

NoveltySpec dice_bias_novelty(std::vector<double> weights, int die) {
    NoveltySpec spec;
    spec.family = NoveltyFamily::dice_bias;
    spec.params = json{{"die", die}, {"weights", weights}};
    if (auto v = validate_params(spec.family, spec.params); !v.empty()) throw std::invalid_argument(v.front());
    spec.name = "dice-bias";
    return spec;
}

// ---- library ----

namespace {

NoveltySpec make(std::string name, NoveltyFamily f, json params, std::string difficulty,
                 std::optional<ParamSampler> sampler = std::nullopt) {
    NoveltySpec s;
    s.name = std::move(name);
    s.family = f;
    s.params = std::move(params);
    s.difficulty = std::move(difficulty);
    s.sampler = std::move(sampler);
    return s;
}

std::vector<double> loaded(int face, double mass) {
    std::vector<double> w(6, (1.0 - mass) / 5.0);
    w[static_cast<std::size_t>(face - 1)] = mass;
    return w;
}

std::vector<NoveltySpec> build_library() {
    using F = NoveltyFamily;
    std::vector<NoveltySpec> lib;
    for (int n : {1, 3, 4, 5}) lib.push_back(make("dice-count-" + std::to_string(n), F::dice_count, {{"count", n}}, n == 3 ? "easy" : "medium"));
    lib.push_back(make("dice-count-3to5", F::dice_count, {{"count", 3}}, "medium", ParamSampler{"count", {3, 4, 5}, {}}));
    lib.push_back(make("dice-bias-six", F::dice_bias, {{"die", 0}, {"weights", loaded(6, 0.5)}}, "hard"));
    lib.push_back(make("dice-bias-one", F::dice_bias, {{"die", 1}, {"weights", loaded(1, 0.4)}}, "hard"));
    lib.push_back(make("dice-bias-even", F::dice_bias,
                       {{"die", 0}, {"weights", std::vector<double>{0.05, 0.3, 0.05, 0.3, 0.05, 0.25}}}, "hard"));
    lib.push_back(make("color-collapse-blue", F::color_collapse, {{"keep", "Blue"}, {"to", "Green"}}, "easy"));
    lib.push_back(make("color-collapse-brown", F::color_collapse, {{"keep", "Brown"}, {"to", "Red"}}, "easy"));
    lib.push_back(make("color-collapse-green", F::color_collapse, {{"keep", "Green"}, {"to", "Yellow"}}, "easy"));
    lib.push_back(make("recolor-boardwalk", F::recolor, {{"slots", {"Boardwalk"}}, {"color", "LimeGreen"}}, "medium"));
    lib.push_back(make("recolor-blue-pair", F::recolor, {{"slots", {"Park Place", "Boardwalk"}}, {"color", "LimeGreen"}}, "easy"));
    lib.push_back(make("recolor-mediterranean", F::recolor, {{"slots", {"Mediterranean Avenue"}}, {"color", "Purple"}}, "medium"));
    lib.push_back(make("recolor-illinois", F::recolor, {{"slots", {"Illinois Avenue"}}, {"color", "Teal"}}, "medium"));
    lib.push_back(make("swap-extend-taxes-5", F::swap_extend, {{"slots", {"Income Tax", "Luxury Tax"}}, {"width", 5}}, "easy"));
    lib.push_back(make("swap-extend-income-tax-3", F::swap_extend, {{"slots", {"Income Tax"}}, {"width", 3}}, "easy"));
    lib.push_back(make("swap-extend-boardwalk-3", F::swap_extend, {{"slots", {"Boardwalk"}}, {"width", 3}}, "medium"));
    lib.push_back(make("swap-extend-go-to-jail-2", F::swap_extend, {{"slots", {"Go To Jail"}}, {"width", 2}}, "medium"));
    lib.push_back(make("swap-extend-reading-4", F::swap_extend, {{"slots", {"Reading Railroad"}}, {"width", 4}}, "medium"));
    lib.push_back(make("swap-boardwalk-mediterranean", F::swap_extend,
                       {{"slots", {"Boardwalk"}}, {"width", 1}, {"swap_with", "Mediterranean Avenue"}}, "hard"));
    for (double f : {0.5, 0.75, 1.5, 2.0}) {
        lib.push_back(make("price-scale-" + json(f).dump(), F::price_scale, {{"factor", f}}, f < 1.0 ? "medium" : "hard"));
    }
    for (double f : {0.5, 1.5, 2.0, 3.0}) {
        lib.push_back(make("rent-scale-" + json(f).dump(), F::rent_scale, {{"factor", f}}, f > 1.5 ? "medium" : "hard"));
    }
    lib.push_back(make("income-tax-0", F::tax_change, {{"slot", "Income Tax"}, {"amount", 0}}, "hard"));
    lib.push_back(make("income-tax-400", F::tax_change, {{"slot", "Income Tax"}, {"amount", 400}}, "medium"));
    lib.push_back(make("luxury-tax-300", F::tax_change, {{"slot", "Luxury Tax"}, {"amount", 300}}, "medium"));
    for (int a : {0, 100, 400}) {
        lib.push_back(make("go-increment-" + std::to_string(a), F::go_increment_change, {{"amount", a}}, a == 0 ? "easy" : "medium"));
    }
    for (double f : {0.0, 2.0, 5.0}) {
        lib.push_back(make("card-amounts-" + json(f).dump(), F::card_amount_change, {{"factor", f}}, "hard"));
    }
    lib.push_back(make("skyscraper-tier", F::new_improvement_tier, {{"rent_multiplier", 1.25}, {"cost_multiplier", 1.0}}, "medium"));
    lib.push_back(make("resort-tier", F::new_improvement_tier, {{"rent_multiplier", 2.0}, {"cost_multiplier", 4.0}}, "medium"));
    lib.push_back(make("cheap-tier", F::new_improvement_tier, {{"rent_multiplier", 1.1}, {"cost_multiplier", 0.5}}, "hard"));
    for (int seed : {1, 2, 3}) {
        lib.push_back(make("board-scramble-" + std::to_string(seed), F::board_scramble, {{"seed", seed}}, "hard"));
    }
    return lib;
}

}  // namespace

const std::vector<NoveltySpec>& enumerate_library() {
    static const std::vector<NoveltySpec> lib = build_library();
    return lib;
}

std::optional<NoveltySpec> find_novelty(std::string_view key) {
    for (const auto& s : enumerate_library()) {
        if (s.name == key || s.id() == key) return s;
    }
    return std::nullopt;
}

const std::vector<DemoNovelty>& demo_novelties() {
    static const std::vector<DemoNovelty> demo = [] {
        json colors = json::array();
        for (const auto& [c, members] : default_board().color_groups) colors.push_back(c);
        return std::vector<DemoNovelty>{
            {"none", "No novelty", "Play the default board.", json::object()},
            {"dice-count", "Dice novelty", "Roll more dice: three, four or five instead of two.",
             {{"count", {{"choices", {3, 4, 5}}, {"default", 3}}}}},
            {"color-collapse", "Property color change",
             "Every street except one kept color group turns a single color, leaving two color groups.",
             {{"keep", {{"choices", colors}, {"default", "Blue"}}},
              {"to", {{"choices", {"Green", "Red", "Yellow", "Orange"}}, {"default", "Green"}}}}},
            {"swap-extend", "Swap and extend", "Selected slots repeat over several consecutive positions.",
             {{"slots",
               {{"choices", {{"Income Tax", "Luxury Tax"}, {"Income Tax"}, {"Luxury Tax"}, {"Boardwalk"}, {"Go To Jail"}}},
                {"default", {"Income Tax", "Luxury Tax"}}}},
              {"width", {{"choices", {2, 3, 4, 5}}, {"default", 5}}}}},
        };
    }();
    return demo;
}

std::optional<NoveltySpec> demo_spec(const std::string& key, const json& params) {
    if (key == "none" || key.empty()) return std::nullopt;
    const auto& demo = demo_novelties();
    auto it = std::find_if(demo.begin(), demo.end(), [&](const DemoNovelty& d) { return d.key == key; });
    if (it == demo.end()) throw std::invalid_argument("unknown demo novelty '" + key + "'");
    json p = json::object();
    for (const auto& [name, field] : it->form.items()) {
        json value = params.is_object() && params.contains(name) ? params[name] : field["default"];
        const auto& choices = field["choices"];
        if (std::find(choices.begin(), choices.end(), value) == choices.end()) {
            throw std::invalid_argument("parameter '" + name + "' must be one of " + choices.dump());
        }
        p[name] = value;
    }
    NoveltySpec spec;
    spec.name = key;
    spec.family = *novelty_family_from_string(key);
    spec.params = std::move(p);
    if (auto v = validate_spec(spec); !v.empty()) throw std::invalid_argument(v.front());
    return spec;
}

}  // namespace novopoly
