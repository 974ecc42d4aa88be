#include <algorithm>
#include <set>
#include <string>
#include <string_view>

#include "corpus_build.hpp"

// Closed word lists backing LexiconPosTagger. They cover frequent words in
// scholarly metadata and the exceptions to the suffix heuristics.

namespace kgqa {

namespace {

const std::set<std::string_view>& nouns() {
  static const std::set<std::string_view> kWords = {
      "abstract", "accuracy", "agent", "algorithm", "analysis", "animal", "answer", "antibody", "api",
      "application", "approach", "approval", "archive", "area", "arrival", "article", "asset", "attack",
      "attribute", "audio", "author", "bacteria", "band", "base", "baseline", "benchmark", "bias", "biomass",
      "blood", "body", "book", "brain", "cancer", "capital", "car", "carbon", "case", "catalyst", "cell",
      "change", "channel", "child", "children", "city", "class", "client", "climate", "clinic", "cloud",
      "cluster", "code", "coefficient", "cohort", "colour", "color", "community", "company", "component",
      "concept", "content", "context", "control", "corpus", "cost", "country", "crop", "crystal", "culture",
      "curve", "data", "database", "dataset", "day", "decision", "degree", "density", "depth", "design",
      "device", "diet", "disease", "document", "domain", "dose", "drive", "drug", "effect", "efficiency",
      "electron", "emission", "energy", "engine", "entity", "environment", "enzyme", "epidemic", "error",
      "event", "evidence", "example", "experiment", "eye", "factor", "feature", "field", "file", "film",
      "fish", "flow", "food", "force", "forest", "form", "frame", "framework", "frequency", "function",
      "gas", "gene", "genome", "goal", "gold", "graph", "graphic", "grid", "group", "growth", "health",
      "heat", "hospital", "host", "hydrogen", "image", "index", "infection", "information", "input",
      "interval", "iron", "item", "journal", "key", "knowledge", "label", "land", "language", "layer",
      "learning", "level", "library", "light", "line", "link", "liquid", "list", "literature", "load",
      "logic", "loss", "machine", "map", "market", "mass", "material", "matrix", "measure", "mechanic",
      "memory", "metal", "method", "metric", "mining", "mode", "model", "module", "molecule", "month",
      "music", "network", "node", "noise", "object", "objective", "ontology", "oxygen", "paper", "parameter",
      "part", "participant", "particle", "patient", "pattern", "people", "person", "phase", "plant",
      "platform", "point", "policy", "pollutant", "population", "portal", "potential", "power", "pressure",
      "price", "problem", "process", "product", "program", "project", "property", "proposal", "protein",
      "protocol", "quality", "query", "question", "range", "rate", "ratio", "reaction", "region",
      "relation", "removal", "report", "research", "resource", "result", "retrieval", "review", "rice",
      "risk", "road", "robot", "role", "rule", "sample", "scale", "scenario", "schema", "science", "score",
      "search", "season", "sensor", "sequence", "server", "service", "set", "signal", "site", "size",
      "skill", "software", "soil", "solution", "source", "space", "species", "speed", "stage", "standard",
      "state", "step", "storage", "strategy", "stress", "structure", "student", "study", "subject",
      "surface", "survey", "survival", "system", "table", "target", "task", "teacher", "team", "technique",
      "technology", "temperature", "term", "terminal", "test", "text", "theory", "thing", "time", "tissue",
      "tool", "topic", "total", "traffic", "transistor", "tree", "trial", "tutorial", "type", "unit", "user",
      "value", "variable", "variant", "vector", "version", "video", "virus", "volume", "water", "wave",
      "web", "weight", "wheat", "word", "work", "workflow", "world", "year", "yield", "zone",
  };
  return kWords;
}

const std::set<std::string_view>& adjectives() {
  static const std::set<std::string_view> kWords = {
      "able", "active", "adaptive", "available", "average", "bad", "basic", "better", "big", "binary",
      "black", "blue", "broad", "central", "certain", "clear", "close", "cold", "common", "complete",
      "complex", "current", "dark", "deep", "different", "difficult", "direct", "dry", "early", "easy",
      "effective", "efficient", "empty", "equal", "exact", "external", "false", "fast", "faster", "few",
      "final", "fine", "first", "flat", "free", "fresh", "full", "general", "global", "good", "great",
      "green", "hard", "heavy", "high", "higher", "hot", "huge", "human", "important", "internal", "joint",
      "key", "large", "larger", "last", "late", "left", "less", "light", "linear", "little", "local", "long",
      "low", "lower", "main", "major", "manual", "maximum", "minimum", "minor", "mobile", "moderate",
      "modern", "multiple", "narrow", "native", "natural", "negative", "new", "next", "normal", "novel",
      "old", "open", "optimal", "original", "overall", "past", "positive", "possible", "present", "previous",
      "primary", "private", "public", "quick", "random", "rapid", "raw", "real", "recent", "red", "relevant",
      "right", "robust", "rough", "rural", "safe", "same", "scalable", "second", "secondary", "semantic",
      "serious", "severe", "sharp", "short", "significant", "similar", "simple", "single", "slow", "small",
      "smaller", "smart", "social", "soft", "solid", "specific", "stable", "static", "strong", "successful",
      "sufficient", "suitable", "supervised", "synthetic", "thin", "thick", "total", "true", "typical",
      "unknown", "unsupervised", "upper", "urban", "useful", "valid", "various", "visual", "warm", "weak",
      "white", "whole", "wide", "wild", "young",
  };
  return kWords;
}

// Verbs, adverbs and other closed-class words that the suffix rules would
// otherwise mislabel.
const std::set<std::string_view>& others() {
  static const std::set<std::string_view> kWords = {
      "according", "across", "almost", "already", "although", "always", "among", "another", "around",
      "based", "become", "becomes", "compared", "consider", "considering", "despite", "due", "ever",
      "found", "given", "however", "including", "less", "made", "make", "many", "may", "might", "much",
      "must", "never", "often", "per", "rather", "shall", "shown", "since", "still", "thus", "towards",
      "upon", "used", "using", "whether", "within", "without", "would", "yet",
  };
  return kWords;
}

}  // namespace

bool lexicon_is_noun(std::string_view lower) { return nouns().count(lower) > 0; }

bool lexicon_is_adjective(std::string_view lower) {
  // "key", "light" and "total" are listed in both; as the head of a phrase
  // the noun reading is the common one.
  if (lexicon_is_noun(lower)) return false;
  return adjectives().count(lower) > 0;
}

bool lexicon_is_other(std::string_view lower) {
  if (others().count(lower)) return true;
  const auto& stop = default_stopwords();
  return std::find(stop.begin(), stop.end(), lower) != stop.end();
}

}  // namespace kgqa
