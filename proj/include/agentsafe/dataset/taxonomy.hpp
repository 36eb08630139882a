#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "agentsafe/core/error.hpp"
#include "agentsafe/core/json_io.hpp"

namespace agentsafe {

struct Category {
  std::string id;
  std::string name;
};

struct Subcategory {
  std::string id;
  std::string category_id;
  std::string name;
};

/// Situational categories and their subcategories. The shipped default
/// (data/taxonomy/default_taxonomy.json) has 21 categories and 192 subcategories.
struct Taxonomy {
  std::vector<Category> categories;
  std::vector<Subcategory> subcategories;

  const Category* category(const std::string& id) const {
    for (const auto& c : categories)
      if (c.id == id) return &c;
    return nullptr;
  }

  const Subcategory* subcategory(const std::string& id) const {
    for (const auto& s : subcategories)
      if (s.id == id) return &s;
    return nullptr;
  }

  std::vector<const Subcategory*> subcategories_of(const std::string& category_id) const {
    std::vector<const Subcategory*> out;
    for (const auto& s : subcategories)
      if (s.category_id == category_id) out.push_back(&s);
    return out;
  }

  void validate() const {
    std::set<std::string> ids;
    for (const auto& c : categories) {
      if (c.id.empty() || !ids.insert(c.id).second)
        throw Error(ErrorCode::ValidationError, "taxonomy: duplicate or empty category id '" + c.id + "'");
    }
    for (const auto& s : subcategories) {
      if (s.id.empty() || !ids.insert(s.id).second)
        throw Error(ErrorCode::ValidationError, "taxonomy: duplicate or empty subcategory id '" + s.id + "'");
      if (!category(s.category_id))
        throw Error(ErrorCode::ValidationError,
                    "taxonomy: subcategory " + s.id + " references missing category " + s.category_id);
    }
  }

  static Taxonomy from_json(const json& j) {
    Taxonomy t;
    try {
      for (const auto& c : j.at("categories")) t.categories.push_back({c.at("id"), c.at("name")});
      for (const auto& s : j.at("subcategories"))
        t.subcategories.push_back({s.at("id"), s.at("category_id"), s.at("name")});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ValidationError, std::string("taxonomy: ") + e.what());
    }
    t.validate();
    return t;
  }

  static Taxonomy load(const std::filesystem::path& path) {
    return from_json(load_json(path, ErrorCode::ValidationError));
  }
};

}  // namespace agentsafe
