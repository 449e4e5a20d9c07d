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

#pragma once

#include "model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ars548
{

/// Pure decision function over tracked objects. Copyable and shareable;
/// evaluation never mutates the object.
struct ObjectPredicate
{
  std::string name;
  std::function<bool(const TrackedObject &)> accepts;

  bool operator()(const TrackedObject & object) const { return accepts(object); }
};

/// Same contract for raw detections.
struct DetectionPredicate
{
  std::string name;
  std::function<bool(const Detection &)> accepts;

  bool operator()(const Detection & detection) const { return accepts(detection); }
};

ObjectPredicate always_true();
ObjectPredicate always_false();

/// True iff object_speed(obj) is strictly above threshold_kmh (converted to
/// m/s). An object at exactly the threshold is rejected. Negative thresholds
/// are refused.
std::optional<ObjectPredicate> min_speed_predicate(double threshold_kmh);

/// True iff the object's dominant classification channel (highest
/// probability, lowest index on ties) equals wanted.
ObjectPredicate class_predicate(Classification wanted);

/// True iff status_movement == moving.
ObjectPredicate moving_only_predicate();

ObjectPredicate compose_and(std::vector<ObjectPredicate> predicates);
ObjectPredicate compose_or(std::vector<ObjectPredicate> predicates);
ObjectPredicate negate(ObjectPredicate predicate);

/// True iff none of the masked invalid bits are set.
DetectionPredicate valid_flags_predicate(uint8_t invalid_mask);

/// True iff rcs >= minimum_dbsm.
DetectionPredicate min_rcs_predicate(int8_t minimum_dbsm);

/// New list with the same stamp and sequence counter holding exactly the
/// accepted elements in input order.
ObjectList filter_objects(const ObjectList & list, const ObjectPredicate & predicate);
DetectionList filter_detections(const DetectionList & list, const DetectionPredicate & predicate);

/// Classification <-> lowercase name ("car", "pedestrian", ...).
const char * classification_name(Classification classification);
std::optional<Classification> parse_classification(const std::string & name);

/// Compiles the filter mini-language: `key=value` terms joined by `&`,
/// combined as a conjunction. Keys: min_speed_kmh, class, moving_only.
/// Empty input compiles to always_true. On failure `predicate` is empty and
/// `error` names the offending term.
struct CompiledFilter
{
  std::optional<ObjectPredicate> predicate;
  std::string error;
};

CompiledFilter parse_object_filter(const std::string & expression);

}  // namespace ars548
