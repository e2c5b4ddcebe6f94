/** Topic form validation, mirroring the server's session-config checks
 * so the form can reject bad input before the round trip.
 */

export interface TopicErrors {
  a?: string;
  b?: string;
}

export function validateTopics(a: string, b: string): TopicErrors {
  const errors: TopicErrors = {};
  const trimmedA = a.trim();
  const trimmedB = b.trim();
  if (!trimmedA) {
    errors.a = "enter a topic phrase";
  }
  if (!trimmedB) {
    errors.b = "enter a topic phrase";
  }
  if (trimmedA && trimmedB && trimmedA.toLowerCase() === trimmedB.toLowerCase()) {
    errors.b = "topics must differ";
  }
  return errors;
}

export function isValid(errors: TopicErrors): boolean {
  return errors.a === undefined && errors.b === undefined;
}
