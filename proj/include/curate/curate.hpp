// SPDX-License-Identifier: Apache-2.0
// Umbrella header. The HTTP judge and the CLI pull in extra single-header
// dependencies and are included separately.
#pragma once

#include "curate/code/distribution.hpp"
#include "curate/code/pipeline.hpp"
#include "curate/core/manifest.hpp"
#include "curate/math/plan.hpp"
#include "curate/merge/merge.hpp"
#include "curate/pack/blend.hpp"
#include "curate/pack/curriculum.hpp"
#include "curate/pack/packing.hpp"
#include "curate/quality/agreement.hpp"
#include "curate/quality/triage.hpp"
#include "curate/reward/composite.hpp"
#include "curate/reward/judge_contract.hpp"
#include "curate/style/report.hpp"
