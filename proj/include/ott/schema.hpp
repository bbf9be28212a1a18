#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace ott
{
  // minimal JSON-schema checker covering the keyword subset used by the
  // shipped schemas: type, properties, required, additionalProperties (bool),
  // items (one schema for every element), enum, minimum, maximum, minItems,
  // maxItems.  returns human-readable problems; empty means valid.
  namespace detail
  {
    using sjson = nlohmann::ordered_json;

    inline bool type_matches(const std::string& t, const sjson& v)
    {
      if( t == "object" )
        return v.is_object();
      if( t == "array" )
        return v.is_array();
      if( t == "string" )
        return v.is_string();
      if( t == "number" )
        return v.is_number();
      if( t == "integer" )
        return v.is_number_integer();
      if( t == "boolean" )
        return v.is_boolean();
      if( t == "null" )
        return v.is_null();
      return false;
    }

    inline void validate_node(const sjson& schema, const sjson& v, const std::string& path,
                              std::vector<std::string>& problems)
    {
      if( !schema.is_object() )
      {
        problems.push_back(path + ": schema node is not an object");
        return;
      }

      if( schema.contains("type") )
      {
        const auto& ty = schema["type"];
        bool ok = false;
        if( ty.is_string() )
          ok = type_matches(ty.get<std::string>(), v);
        else if( ty.is_array() )
          for( const auto& t : ty )
            ok = ok || (t.is_string() && type_matches(t.get<std::string>(), v));
        if( !ok )
        {
          problems.push_back(path + ": type mismatch, got " + std::string(v.type_name()));
          return; // further keyword checks would only cascade
        }
      }

      if( schema.contains("enum") )
      {
        bool ok = false;
        for( const auto& cand : schema["enum"] )
          ok = ok || cand == v;
        if( !ok )
          problems.push_back(path + ": value not in enum");
      }

      if( v.is_number() )
      {
        if( schema.contains("minimum") && v.get<double>() < schema["minimum"].get<double>() )
          problems.push_back(path + ": below minimum");
        if( schema.contains("maximum") && v.get<double>() > schema["maximum"].get<double>() )
          problems.push_back(path + ": above maximum");
      }

      if( v.is_object() )
      {
        if( schema.contains("required") )
          for( const auto& k : schema["required"] )
            if( !v.contains(k.get<std::string>()) )
              problems.push_back(path + ": missing required key " + k.get<std::string>());
        const bool extra_ok = !schema.contains("additionalProperties") ||
                              schema["additionalProperties"].get<bool>();
        const sjson props =
            schema.contains("properties") ? schema["properties"] : sjson::object();
        for( const auto& [key, val] : v.items() )
        {
          if( props.contains(key) )
            validate_node(props[key], val, path + "/" + key, problems);
          else if( !extra_ok )
            problems.push_back(path + ": unexpected key " + key);
        }
      }

      if( v.is_array() )
      {
        if( schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>() )
          problems.push_back(path + ": too few items");
        if( schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>() )
          problems.push_back(path + ": too many items");
        if( schema.contains("items") )
          for( std::size_t i = 0; i < v.size(); ++i )
            validate_node(schema["items"], v[i], path + "/" + std::to_string(i), problems);
      }
    }
  }

  inline std::vector<std::string> schema_problems(const nlohmann::ordered_json& schema,
                                                  const nlohmann::ordered_json& value)
  {
    std::vector<std::string> problems;
    detail::validate_node(schema, value, "", problems);
    return problems;
  }

  inline bool schema_valid(const nlohmann::ordered_json& schema,
                           const nlohmann::ordered_json& value)
  {
    return schema_problems(schema, value).empty();
  }
}
