// Copyright 2026 The certdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "certdiff/actions.hpp"
#include "certdiff/builder.hpp"
#include "certdiff/campaign.hpp"
#include "certdiff/certificate.hpp"
#include "certdiff/corpus.hpp"
#include "certdiff/der.hpp"
#include "certdiff/discrepancy_db.hpp"
#include "certdiff/extensions.hpp"
#include "certdiff/external.hpp"
#include "certdiff/features.hpp"
#include "certdiff/log.hpp"
#include "certdiff/mock_sign.hpp"
#include "certdiff/oids.hpp"
#include "certdiff/panel.hpp"
#include "certdiff/pem.hpp"
#include "certdiff/profiles.hpp"
#include "certdiff/qnet.hpp"
#include "certdiff/report.hpp"
#include "certdiff/rng.hpp"
#include "certdiff/trust.hpp"
#include "certdiff/verdict.hpp"
