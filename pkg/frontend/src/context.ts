import type { ApiClient } from "./api.js";
import type { UiSession } from "./state.js";
import type { TaxonomyDoc, ThreatActorDoc } from "./types.js";

/** Everything the views need: client, catalog, presets, and the live session. */
export interface AppContext {
  api: ApiClient;
  taxonomy: TaxonomyDoc;
  presets: ThreatActorDoc[];
  session: UiSession;
  domainNames: Map<string, string>;
}
