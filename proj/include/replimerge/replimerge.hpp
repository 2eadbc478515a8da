/* Copyright 2026 The replimerge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include "replimerge/automaton.hpp"
#include "replimerge/consensus.hpp"
#include "replimerge/doc_tree.hpp"
#include "replimerge/dyck.hpp"
#include "replimerge/equivalence.hpp"
#include "replimerge/error.hpp"
#include "replimerge/expansion.hpp"
#include "replimerge/grammar.hpp"
#include "replimerge/oracle.hpp"
#include "replimerge/random_instance.hpp"
#include "replimerge/reference_instance.hpp"
#include "replimerge/text_format.hpp"
#include "replimerge/tree_merge.hpp"
#include "replimerge/view.hpp"
#include "replimerge/workflow.hpp"
