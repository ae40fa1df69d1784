#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "novopoly/board.hpp"
#include "novopoly/engine.hpp"
#include "novopoly/rng.hpp"

namespace novopoly {

enum class NoveltyCategory { attribute, entity_class, representation };

enum class NoveltyFamily {
    dice_count,
    dice_bias,
    color_collapse,
    recolor,
    swap_extend,
    price_scale,
    rent_scale,
    tax_change,
    go_increment_change,
    card_amount_change,
    new_improvement_tier,
    board_scramble,
};

std::string_view to_string(NoveltyCategory c);
std::string_view to_string(NoveltyFamily f);
std::optional<NoveltyFamily> novelty_family_from_string(std::string_view name);
NoveltyCategory category_of(NoveltyFamily f);

// Distribution over one parameter, redrawn for every post-onset game.
struct ParamSampler {
    std::string param;
    std::vector<json> choices;
    std::vector<double> weights;  // empty = uniform

    bool operator==(const ParamSampler&) const = default;
};

struct NoveltySpec {
    std::string name;
    NoveltyFamily family = NoveltyFamily::dice_count;
    json params = json::object();
    std::optional<ParamSampler> sampler;
    std::string difficulty;  // easy / medium / hard; informational

    NoveltyCategory category() const { return category_of(family); }
    // Content hash over family, parameters and sampler.
    std::string id() const;
    bool operator==(const NoveltySpec&) const = default;
};

struct NoveltyInstance {
    std::string spec_id;
    NoveltyFamily family = NoveltyFamily::dice_count;
    json params = json::object();
    int game_index = 0;

    // Content hash over spec id and concrete parameters (not the game index).
    std::string id() const;
    bool operator==(const NoveltyInstance&) const = default;
};

class InjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json spec_to_json(const NoveltySpec& spec);
// Throws std::invalid_argument on a malformed document.
NoveltySpec spec_from_json(const json& j);
json instance_to_json(const NoveltyInstance& inst);
NoveltyInstance instance_from_json(const json& j);

// Accepts one spec object, an array of specs, or {"novelties": [...]}.
std::vector<NoveltySpec> load_novelties(std::string_view text);

// Violations of the family's parameter domain for concrete parameters (no board needed).
std::vector<std::string> validate_params(NoveltyFamily family, const json& params);
// Spec-level checks, including every sampler choice.
std::vector<std::string> validate_spec(const NoveltySpec& spec);

// Pure transform of (schema, limits). Throws InjectionError naming the violated constraint.
std::pair<BoardSchema, GameLimits> apply_novelty(const BoardSchema& schema, const GameLimits& limits,
                                                 const NoveltyInstance& instance);
inline BoardSchema apply_novelty(const BoardSchema& schema, const NoveltyInstance& instance) {
    return apply_novelty(schema, GameLimits{}, instance).first;
}

// Fixed specs ignore rng; sampled specs consume exactly one draw.
NoveltyInstance sample_instance(const NoveltySpec& spec, Rng& rng, int game_index);
// A spec with no sampler, as an instance.
NoveltyInstance fixed_instance(const NoveltySpec& spec, int game_index = 0);
// The instance used for a standalone game with the given seed.
NoveltyInstance instance_for_game(const NoveltySpec& spec, std::uint64_t seed);

// Replaces the weights of one die (0-based). Throws std::invalid_argument on bad weights.
NoveltySpec dice_bias_novelty(std::vector<double> weights, int die = 0);

// The shipped example library.
const std::vector<NoveltySpec>& enumerate_library();
std::optional<NoveltySpec> find_novelty(std::string_view id_or_name);

// Curated options for the demo: each has a family and a parameter form.
struct DemoNovelty {
    std::string key;  // "none", "dice-count", "color-collapse", "swap-extend"
    std::string label;
    std::string description;
    json form;  // parameter name -> {choices, default}
};
const std::vector<DemoNovelty>& demo_novelties();
// Builds the spec for a demo selection. nullopt for "none". Throws std::invalid_argument.
std::optional<NoveltySpec> demo_spec(const std::string& key, const json& params);

}  // namespace novopoly
