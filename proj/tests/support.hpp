#pragma once

#include "fsmkit/model.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fsmkit::testing {

inline std::filesystem::path source_path(const std::string& rel) {
    return std::filesystem::path(FSMKIT_SOURCE_DIR) / rel;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline InputValuation valuation(std::initializer_list<std::pair<const char*, bool>> bits) {
    InputValuation v;
    for (const auto& [k, b] : bits)
        v[k] = b;
    return v;
}

class MachineGenerator {
public:
    explicit MachineGenerator(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return uniform(0, 1) == 1; }

    Guard guard(const std::vector<std::string>& inputs, int depth) {
        const int pick = depth <= 0 ? uniform(0, 5) : uniform(0, 8);
        if (pick == 0)
            return Guard::constant(coin());
        if (pick <= 5)
            return Guard::variable(inputs[static_cast<std::size_t>(uniform(0, static_cast<int>(inputs.size()) - 1))]);
        if (pick == 6)
            return Guard::negate(guard(inputs, depth - 1));
        if (pick == 7)
            return Guard::both(guard(inputs, depth - 1), guard(inputs, depth - 1));
        return Guard::either(guard(inputs, depth - 1), guard(inputs, depth - 1));
    }

    /// Deterministic and total by construction: transition i fires when g_i
    /// holds and no earlier g_j does; the last one takes the remainder.
    FsmSpec machine(int max_states = 6, int max_inputs = 4) {
        static const std::vector<std::string> kInputPool{"a", "b", "req", "ack", "go", "rst"};
        static const std::vector<std::string> kOutputPool{"busy", "led", "done", "y"};
        static const std::vector<std::string> kPulsePool{"fire", "tick", "st"};
        FsmSpec spec;
        spec.name = "m" + std::to_string(uniform(0, 999));
        auto take = [&](const std::vector<std::string>& pool, int n) {
            std::vector<std::string> names(pool);
            std::shuffle(names.begin(), names.end(), rng_);
            names.resize(static_cast<std::size_t>(n));
            return names;
        };
        spec.inputs = take(kInputPool, uniform(1, max_inputs));
        spec.moore_outputs = take(kOutputPool, uniform(0, 3));
        spec.pulse_outputs = take(kPulsePool, uniform(0, 2));
        if (coin())
            spec.reset_input = spec.inputs[static_cast<std::size_t>(uniform(0, static_cast<int>(spec.inputs.size()) - 1))];

        const int n_states = uniform(1, max_states);
        for (int s = 0; s < n_states; ++s) {
            StateDef st{"S" + std::to_string(s) + (coin() ? "_x" : ""), {}, {}};
            for (const auto& o : spec.moore_outputs)
                if (coin())
                    st.moore_assignments[o] = coin();
            spec.states.push_back(std::move(st));
        }
        for (auto& st : spec.states) {
            const int k = uniform(1, 3);
            std::vector<Guard> picks;
            for (int i = 0; i + 1 < k; ++i)
                picks.push_back(guard(spec.inputs, 2));
            for (int i = 0; i < k; ++i) {
                Guard g = i + 1 < k ? picks[static_cast<std::size_t>(i)] : Guard::constant(true);
                for (int j = i - 1; j >= 0; --j)
                    g = Guard::both(Guard::negate(picks[static_cast<std::size_t>(j)]), g);
                Transition t{g, spec.states[static_cast<std::size_t>(uniform(0, n_states - 1))].name, {}};
                for (const auto& p : spec.pulse_outputs)
                    if (coin())
                        t.pulses.insert(p);
                st.transitions.push_back(std::move(t));
            }
        }
        spec.initial_state = spec.states[static_cast<std::size_t>(uniform(0, n_states - 1))].name;
        return spec;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace fsmkit::testing
