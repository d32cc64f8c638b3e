#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "kgcl/rng.hpp"

namespace kgcl {

struct Triple {
  std::uint32_t head = 0;
  std::uint32_t relation = 0;
  std::uint32_t tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// 1 = triple retained. Indexed by the KG's canonical (sorted) triple order.
using TripleMask = std::vector<std::uint8_t>;

// Item ids double as entity ids 0..num_items-1 so items and entities share
// one embedding table; non-item entities follow. Triples are kept sorted and
// unique; item_neighbors is a CSR over triples whose head is an item, each
// entry carrying its triple index for mask lookups.
struct KnowledgeGraph {
  std::size_t num_items = 0;
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::vector<Triple> triples;

  std::vector<std::size_t> item_offsets;  // size num_items + 1
  std::vector<std::uint32_t> nbr_entity;
  std::vector<std::uint32_t> nbr_relation;
  std::vector<std::size_t> nbr_triple;

  std::size_t item_neighbor_count(std::uint32_t i) const {
    return item_offsets[i + 1] - item_offsets[i];
  }

  void build_index() {
    std::sort(triples.begin(), triples.end());
    item_offsets.assign(num_items + 1, 0);
    for (const Triple& t : triples)
      if (t.head < num_items) item_offsets[t.head + 1]++;
    for (std::size_t i = 0; i < num_items; ++i) item_offsets[i + 1] += item_offsets[i];
    std::size_t n = item_offsets[num_items];
    nbr_entity.resize(n);
    nbr_relation.resize(n);
    nbr_triple.resize(n);
    std::vector<std::size_t> fill(item_offsets.begin(), item_offsets.end() - 1);
    for (std::size_t k = 0; k < triples.size(); ++k) {
      const Triple& t = triples[k];
      if (t.head >= num_items) continue;
      std::size_t pos = fill[t.head]++;
      nbr_entity[pos] = t.tail;
      nbr_relation[pos] = t.relation;
      nbr_triple[pos] = k;
    }
  }
};

struct KgLoadResult {
  KnowledgeGraph kg;
  std::size_t duplicate_count = 0;
};

inline KgLoadResult make_knowledge_graph(std::size_t num_items,
                                         std::vector<Triple> raw,
                                         std::size_t min_entities = 0,
                                         std::size_t min_relations = 0) {
  std::sort(raw.begin(), raw.end());
  std::size_t before = raw.size();
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  KgLoadResult out;
  out.duplicate_count = before - raw.size();
  out.kg.num_items = num_items;
  std::size_t max_ent = num_items, max_rel = min_relations;
  for (const Triple& t : raw) {
    max_ent = std::max<std::size_t>(max_ent, std::max(t.head, t.tail) + 1);
    max_rel = std::max<std::size_t>(max_rel, t.relation + 1);
  }
  out.kg.num_entities = std::max(max_ent, std::max(min_entities, num_items));
  out.kg.num_relations = max_rel;
  out.kg.triples = std::move(raw);
  out.kg.build_index();
  return out;
}

// Format: `head relation tail` per line. Entities referenced only as tails
// get ids >= num_items by construction of the input files.
inline KgLoadResult load_kg(const std::string& path, std::size_t num_items) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kg file: " + path);
  std::vector<Triple> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 3 tokens, got " + std::to_string(toks.size()));
    unsigned long long v[3];
    for (int k = 0; k < 3; ++k) {
      try {
        std::size_t used = 0;
        v[k] = std::stoull(toks[k], &used);
        if (used != toks[k].size()) throw std::invalid_argument(toks[k]);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed token '" + toks[k] + "'");
      }
    }
    raw.push_back(Triple{static_cast<std::uint32_t>(v[0]),
                         static_cast<std::uint32_t>(v[1]),
                         static_cast<std::uint32_t>(v[2])});
  }
  return make_knowledge_graph(num_items, std::move(raw));
}

inline void save_kg(const KnowledgeGraph& kg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write kg file: " + path);
  for (const Triple& t : kg.triples)
    out << t.head << ' ' << t.relation << ' ' << t.tail << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Adds ceil(fraction * |triples|) uniformly random (item, relation, entity)
// triples that do not duplicate existing ones. The input KG is untouched.
inline KnowledgeGraph inject_kg_noise(const KnowledgeGraph& kg, double fraction,
                                      Rng& rng) {
  if (fraction < 0.0) throw std::invalid_argument("noise fraction must be >= 0");
  if (kg.triples.empty()) throw std::invalid_argument("cannot inject noise into an empty KG");
  std::size_t target =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(kg.triples.size())));
  if (target == 0) {
    KnowledgeGraph copy = kg;
    return copy;
  }
  std::size_t space = kg.num_items * kg.num_relations * kg.num_entities;
  std::size_t item_headed = 0;
  for (const Triple& t : kg.triples)
    if (t.head < kg.num_items) ++item_headed;
  if (target > space - item_headed)
    throw std::invalid_argument("noise fraction exhausts the distinct-triple space");

  std::vector<Triple> triples = kg.triples;  // sorted
  std::vector<Triple> added;
  added.reserve(target);
  auto exists = [&](const Triple& t) {
    return std::binary_search(triples.begin(), triples.end(), t) ||
           std::find(added.begin(), added.end(), t) != added.end();
  };
  while (added.size() < target) {
    Triple t;
    t.head = static_cast<std::uint32_t>(rand_index(rng, kg.num_items));
    t.relation = static_cast<std::uint32_t>(rand_index(rng, kg.num_relations));
    t.tail = static_cast<std::uint32_t>(rand_index(rng, kg.num_entities));
    if (!exists(t)) added.push_back(t);
  }
  triples.insert(triples.end(), added.begin(), added.end());
  KnowledgeGraph out;
  out.num_items = kg.num_items;
  out.num_entities = kg.num_entities;
  out.num_relations = kg.num_relations;
  out.triples = std::move(triples);
  out.build_index();
  return out;
}

}  // namespace kgcl
