/** Mirror of the DisplayState JSON the monitor service serves and streams. */

export type PanelColor = "GREEN" | "YELLOW" | "RED" | "GREY";

export interface PanelState {
  label: string;
  color: PanelColor;
}

export interface MessageBlock {
  text: string;
  color: PanelColor;
}

export interface CountdownState {
  kind: "TO_OUTAGE_START" | "TO_SERVICE_RETURN";
  target: number;
  remaining: number;
  /** Server-formatted HH:MM:SS; rendered verbatim, never recomputed here. */
  text: string;
}

export interface CatalogEntry {
  id: number;
  description: string;
}

export interface StatusSnapshot {
  connectivity: "CONNECTED" | "NO_DATA";
  mode_panel: PanelState;
  approach_panel: PanelState;
  message_block: MessageBlock | null;
  countdown: CountdownState | null;
  utc_clock: number;
  active_alerts: CatalogEntry[];
  active_alarms: CatalogEntry[];
  station_id: string;
  last_sequence: number;
  counters?: { messages: number; bad_frames: number; out_of_order: number };
}

/** Health of the console's own link to the monitor service. Losing it is
 * not the same thing as the station's NO_DATA grey state. */
export type LinkState = "connecting" | "live" | "lost";

export interface ViewModel {
  snapshot: StatusSnapshot | null;
  link: LinkState;
}

export interface Catalogs {
  alerts: CatalogEntry[];
  alarms: CatalogEntry[];
}

export interface UiConfig {
  statusBase: string;
  /** Operator panel stays hidden when null (read-only deployments). */
  simControlBase: string | null;
}
