// Template implementation of the lazy product exploration; included from fsa.hpp.

#include <deque>
#include <unordered_map>

namespace regcocycle::fsa {

template <typename Key, typename Hash>
Dfa build_reachable(const Alphabet& alphabet, const Key& start,
                    const std::function<std::optional<Key>(const Key&, Symbol)>& step,
                    const std::function<bool(const Key&)>& accept, std::size_t state_limit,
                    std::vector<Key>* keys_out) {
  const auto k = static_cast<Symbol>(alphabet.size());
  std::unordered_map<Key, StateId, Hash> ids;
  std::vector<Key> keys;
  std::vector<StateId> delta;
  std::vector<char> accepting;

  // State 0 is the sink.
  accepting.push_back(0);
  delta.insert(delta.end(), static_cast<std::size_t>(k), 0);

  auto intern = [&](const Key& key) -> StateId {
    auto [it, inserted] = ids.try_emplace(key, static_cast<StateId>(accepting.size()));
    if (inserted) {
      if (accepting.size() >= state_limit)
        throw AutomatonError("product construction exceeded state limit");
      keys.push_back(key);
      accepting.push_back(accept(key) ? 1 : 0);
      delta.insert(delta.end(), static_cast<std::size_t>(k), 0);
    }
    return it->second;
  };

  const StateId start_id = intern(start);
  for (std::size_t q = 0; q < keys.size(); ++q) {
    const Key key = keys[q];
    const auto state = static_cast<std::size_t>(q + 1);
    for (Symbol a = 0; a < k; ++a) {
      auto next = step(key, a);
      delta[state * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)] = next ? intern(*next) : 0;
    }
  }
  if (keys_out) *keys_out = std::move(keys);
  return Dfa(alphabet, start_id, std::move(delta), std::move(accepting));
}

}  // namespace regcocycle::fsa
