// Copyright 2026 ars548-toolkit contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "filter.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace ars548
{

namespace
{

std::string trim(const std::string & text)
{
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

}  // namespace

ObjectPredicate always_true()
{
  return {"true", [](const TrackedObject &) { return true; }};
}

ObjectPredicate always_false()
{
  return {"false", [](const TrackedObject &) { return false; }};
}

std::optional<ObjectPredicate> min_speed_predicate(double threshold_kmh)
{
  if (!(threshold_kmh >= 0.0)) {
    return std::nullopt;
  }
  const double threshold_mps = threshold_kmh / kmh_per_mps;
  char name[64];
  std::snprintf(name, sizeof(name), "min_speed_kmh=%g", threshold_kmh);
  return ObjectPredicate{
    name, [threshold_mps](const TrackedObject & object) {
      return object_speed(object) > threshold_mps;
    }};
}

ObjectPredicate class_predicate(Classification wanted)
{
  std::string name = std::string("class=") + classification_name(wanted);
  return {
    std::move(name), [wanted](const TrackedObject & object) {
      const auto & probabilities = object.classification_probabilities;
      const auto dominant =
        std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin();
      return static_cast<Classification>(dominant) == wanted;
    }};
}

ObjectPredicate moving_only_predicate()
{
  return {"moving_only=true", [](const TrackedObject & object) {
            return object.status_movement == MovementStatus::moving;
          }};
}

namespace
{

std::string joined_names(const std::vector<ObjectPredicate> & predicates, const char * connective)
{
  std::string out = "(";
  for (std::size_t i = 0; i < predicates.size(); ++i) {
    if (i > 0) {
      out += connective;
    }
    out += predicates[i].name;
  }
  out += ")";
  return out;
}

}  // namespace

ObjectPredicate compose_and(std::vector<ObjectPredicate> predicates)
{
  std::string name = joined_names(predicates, " & ");
  return {
    std::move(name), [predicates = std::move(predicates)](const TrackedObject & object) {
      return std::all_of(
        predicates.begin(), predicates.end(),
        [&](const ObjectPredicate & predicate) { return predicate(object); });
    }};
}

ObjectPredicate compose_or(std::vector<ObjectPredicate> predicates)
{
  std::string name = joined_names(predicates, " | ");
  return {
    std::move(name), [predicates = std::move(predicates)](const TrackedObject & object) {
      return std::any_of(
        predicates.begin(), predicates.end(),
        [&](const ObjectPredicate & predicate) { return predicate(object); });
    }};
}

ObjectPredicate negate(ObjectPredicate predicate)
{
  std::string name = "!(" + predicate.name + ")";
  return {
    std::move(name), [inner = std::move(predicate)](const TrackedObject & object) {
      return !inner(object);
    }};
}

DetectionPredicate valid_flags_predicate(uint8_t invalid_mask)
{
  char name[48];
  std::snprintf(name, sizeof(name), "valid_flags(mask=0x%02X)", invalid_mask);
  return {name, [invalid_mask](const Detection & detection) {
            return (detection.invalid_flags & invalid_mask) == 0;
          }};
}

DetectionPredicate min_rcs_predicate(int8_t minimum_dbsm)
{
  char name[32];
  std::snprintf(name, sizeof(name), "min_rcs=%d", minimum_dbsm);
  return {name, [minimum_dbsm](const Detection & detection) {
            return detection.rcs >= minimum_dbsm;
          }};
}

ObjectList filter_objects(const ObjectList & list, const ObjectPredicate & predicate)
{
  ObjectList out;
  out.stamp = list.stamp;
  out.sequence_counter = list.sequence_counter;
  for (const auto & object : list.objects) {
    if (predicate(object)) {
      out.objects.push_back(object);
    }
  }
  return out;
}

DetectionList filter_detections(const DetectionList & list, const DetectionPredicate & predicate)
{
  DetectionList out;
  out.stamp = list.stamp;
  out.sequence_counter = list.sequence_counter;
  out.origin_x = list.origin_x;
  out.origin_y = list.origin_y;
  out.origin_z = list.origin_z;
  for (const auto & detection : list.detections) {
    if (predicate(detection)) {
      out.detections.push_back(detection);
    }
  }
  return out;
}

const char * classification_name(Classification classification)
{
  switch (classification) {
    case Classification::unknown:
      return "unknown";
    case Classification::car:
      return "car";
    case Classification::truck:
      return "truck";
    case Classification::motorcycle:
      return "motorcycle";
    case Classification::pedestrian:
      return "pedestrian";
    case Classification::bicycle:
      return "bicycle";
    case Classification::animal:
      return "animal";
    case Classification::hazard:
      return "hazard";
  }
  return "invalid";
}

std::optional<Classification> parse_classification(const std::string & name)
{
  std::string lowered = name;
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  for (uint8_t value = 0; value < classification_count; ++value) {
    if (lowered == classification_name(static_cast<Classification>(value))) {
      return static_cast<Classification>(value);
    }
  }
  return std::nullopt;
}

CompiledFilter parse_object_filter(const std::string & expression)
{
  if (trim(expression).empty()) {
    return {always_true(), ""};
  }

  std::vector<std::string> raw_terms;
  std::size_t start = 0;
  while (true) {
    const std::size_t amp = expression.find('&', start);
    const std::size_t end = amp == std::string::npos ? expression.size() : amp;
    raw_terms.push_back(trim(expression.substr(start, end - start)));
    if (amp == std::string::npos) {
      break;
    }
    start = amp + 1;
  }

  std::vector<ObjectPredicate> terms;
  for (const std::string & term : raw_terms) {
    if (term.empty()) {
      return {std::nullopt, "empty filter term"};
    }

    const std::size_t eq = term.find('=');
    if (eq == std::string::npos) {
      return {std::nullopt, "filter term '" + term + "' is not key=value"};
    }
    const std::string key = trim(term.substr(0, eq));
    const std::string value = trim(term.substr(eq + 1));

    if (key == "min_speed_kmh") {
      char tail = 0;
      double threshold = 0.0;
      if (std::sscanf(value.c_str(), "%lf%c", &threshold, &tail) != 1) {
        return {std::nullopt, "min_speed_kmh value '" + value + "' is not a number"};
      }
      auto predicate = min_speed_predicate(threshold);
      if (!predicate) {
        return {std::nullopt, "min_speed_kmh must be >= 0, got " + value};
      }
      terms.push_back(std::move(*predicate));
    } else if (key == "class") {
      auto classification = parse_classification(value);
      if (!classification) {
        return {std::nullopt, "unknown class '" + value + "'"};
      }
      terms.push_back(class_predicate(*classification));
    } else if (key == "moving_only") {
      if (value == "true") {
        terms.push_back(moving_only_predicate());
      } else if (value == "false") {
        terms.push_back(always_true());
      } else {
        return {std::nullopt, "moving_only expects true or false, got '" + value + "'"};
      }
    } else {
      return {std::nullopt, "unknown filter key '" + key + "'"};
    }
  }

  if (terms.size() == 1) {
    return {std::move(terms.front()), ""};
  }
  return {compose_and(std::move(terms)), ""};
}

}  // namespace ars548
