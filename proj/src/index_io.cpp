#include "scribeforge/index_io.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/utf8.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace scribeforge {

using nlohmann::json;

namespace {

json lines_to_json(const std::vector<IndexedLine>& lines) {
  json out = json::array();
  for (const auto& line : lines) {
    json spans = json::array();
    for (const auto& s : line.boundaries.spans) {
      spans.push_back(json::array({utf8::encode(s.character), s.start_px, s.end_px}));
    }
    out.push_back(json{{"id", line.id}, {"image_path", line.image_path}, {"width", line.boundaries.width},
                       {"spans", std::move(spans)}});
  }
  return out;
}

BoundaryDocument document_from(const json& doc) {
  BoundaryDocument out;
  out.alphabet = Alphabet::from_utf8(doc.at("alphabet").get<std::string>());
  for (const auto& jl : doc.at("lines")) {
    IndexedLine line;
    line.id = jl.at("id").get<std::string>();
    line.image_path = jl.at("image_path").get<std::string>();
    line.boundaries.line_id = line.id;
    line.boundaries.width = jl.at("width").get<int>();
    for (const auto& js : jl.at("spans")) {
      const auto ch = utf8::decode(js.at(0).get<std::string>());
      if (ch.size() != 1) {
        throw FormatError("line '" + line.id + "': span character must be a single symbol");
      }
      line.boundaries.spans.push_back(SymbolSpan{ch[0], js.at(1).get<int>(), js.at(2).get<int>()});
    }
    line.transcript = line.boundaries.text();
    out.lines.push_back(std::move(line));
  }
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

} // namespace

std::string boundaries_to_json(const Alphabet& alphabet, const std::vector<IndexedLine>& lines) {
  json doc{{"alphabet", alphabet.to_utf8()}, {"lines", lines_to_json(lines)}};
  return doc.dump() + "\n";
}

BoundaryDocument boundaries_from_json(const std::string& text) {
  try {
    return document_from(parse(text));
  } catch (const json::exception& e) {
    throw FormatError(std::string("boundary file: ") + e.what());
  }
}

std::string index_to_json(const FragmentIndex& index, const TokenizerBank& bank) {
  json expressions = json::object();
  for (const auto& lex : bank.lexicons) {
    json list = json::array();
    for (const auto& e : lex.expressions) {
      list.push_back(utf8::encode(e));
    }
    expressions[std::to_string(lex.max_dim)] = std::move(list);
  }
  json doc{{"alphabet", index.alphabet().to_utf8()},
           {"lines", lines_to_json(index.lines())},
           {"expressions", std::move(expressions)}};
  return doc.dump() + "\n";
}

LoadedIndex index_from_json(const std::string& text, std::span<const double> probabilities) {
  try {
    const json doc = parse(text);
    BoundaryDocument lines = document_from(doc);

    std::map<int, MweLexicon> by_dim;
    for (const auto& [key, list] : doc.at("expressions").items()) {
      MweLexicon lex;
      lex.max_dim = std::stoi(key);
      for (const auto& e : list) {
        lex.expressions.insert(utf8::decode(e.get<std::string>()));
      }
      by_dim.emplace(lex.max_dim, std::move(lex));
    }
    TokenizerBank bank;
    for (auto& [dim, lex] : by_dim) {
      bank.lexicons.push_back(std::move(lex));
    }
    bank.probabilities.assign(probabilities.begin(), probabilities.end());
    bank.validate();
    for (const auto& line : lines.lines) {
      for (char32_t c : line.transcript) {
        bank.atoms.insert(c);
      }
    }
    FragmentIndex index = build_fragment_index(std::move(lines.lines), bank, lines.alphabet);
    return LoadedIndex{std::move(index), std::move(bank)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("index file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("index file: ") + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot write '" + path.string() + "'");
  }
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace scribeforge
